#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace big5 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Value outside its declared range (trait values, overrides, Likert scores).
struct RangeError : Error {
  using Error::Error;
};

// Unknown trait, facet, or other vocabulary name.
struct NameError : Error {
  using Error::Error;
};

// Inputs that disagree with each other (scale mismatch, malformed message list).
struct ConsistencyError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ConfigValidationError : ConfigError {
  explicit ConfigValidationError(std::vector<std::string> problems)
      : ConfigError(join(problems)), violations(std::move(problems)) {}

  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) out += "\n  - " + p;
    return out;
  }
};

struct TransportError : Error {
  TransportError(const std::string& what, bool retryable_, std::vector<std::string> log = {})
      : Error(what), retryable(retryable_), attempt_log(std::move(log)) {}

  bool retryable;
  std::vector<std::string> attempt_log;
};

struct ProtocolError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct GenerationError : Error {
  using Error::Error;
};

struct LoadError : Error {
  using Error::Error;
};

struct StatisticsError : Error {
  using Error::Error;
};

struct InputError : Error {
  using Error::Error;
};

}  // namespace big5
