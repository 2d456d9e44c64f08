#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace big5::detail {

// One delimited record with RFC 4180 quoting ("" escapes a quote).
inline std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string quote_field(std::string_view field, char delim = ',') {
  if (field.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string join_record(const std::vector<std::string>& fields, char delim = ',') {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += delim;
    out += quote_field(fields[i], delim);
  }
  return out;
}

}  // namespace big5::detail
