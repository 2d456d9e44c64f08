#pragma once

// Questionnaire item banks, per-item Likert administration through the
// gateway, answer parsing, and reverse-keyed trait scoring.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "big5/detail/csv.hpp"
#include "big5/detail/parallel.hpp"
#include "big5/detail/random.hpp"
#include "big5/errors.hpp"
#include "big5/gateway.hpp"
#include "big5/persona.hpp"
#include "big5/prompt.hpp"

namespace big5 {

struct Item {
  std::string id;
  std::string text;
  Trait trait;
  std::optional<Facet> facet;
  bool reverse_keyed = false;
};

struct Questionnaire {
  std::string name;
  int likert_min = 1;
  int likert_max = 5;
  std::vector<Item> items;

  std::size_t count(Trait t) const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [t](const Item& i) { return i.trait == t; }));
  }
  bool covers_all_traits() const {
    return std::all_of(kTraits.begin(), kTraits.end(), [&](Trait t) { return count(t) > 0; });
  }
};

struct LoadOptions {
  std::optional<std::string> name;
  std::optional<int> likert_min;
  std::optional<int> likert_max;
};

namespace detail {

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string strip(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

}  // namespace detail

// Item-bank table: header row with columns id, text, trait, facet (optional),
// reverse (0/1). Comma or tab separated. Leading "# name: ..." and
// "# likert: lo-hi" lines set the bank's name and answer range.
inline Questionnaire read_questionnaire(std::istream& in, const std::string& source, const LoadOptions& opts = {}) {
  Questionnaire q;
  q.name = source;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> LoadError {
    return LoadError(source + ":" + std::to_string(line_no) + ": " + msg);
  };

  std::string line;
  std::vector<std::string> header;
  char delim = ',';
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = detail::strip(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const auto colon = s.find(':');
      if (colon == std::string::npos) continue;
      const auto key = detail::lower(detail::strip(s.substr(1, colon - 1)));
      const auto value = detail::strip(s.substr(colon + 1));
      if (key == "name") {
        q.name = value;
      } else if (key == "likert") {
        int lo = 0, hi = 0;
        char sep = 0;
        std::istringstream vs(value);
        if (!(vs >> lo >> sep >> hi) || sep != '-') throw fail("likert directive must look like '1-5'");
        q.likert_min = lo;
        q.likert_max = hi;
      }
      continue;
    }
    delim = line.find('\t') != std::string::npos ? '\t' : ',';
    header = detail::split_record(line, delim);
    for (auto& h : header) h = detail::lower(detail::strip(h));
    break;
  }
  if (header.empty()) throw fail("missing header row");

  auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw fail("missing required column '" + name + "'");
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_id = *column("id", true);
  const auto c_text = *column("text", true);
  const auto c_trait = *column("trait", true);
  const auto c_facet = column("facet", false);
  const auto c_rev = *column("reverse", true);

  if (opts.name) q.name = *opts.name;
  if (opts.likert_min) q.likert_min = *opts.likert_min;
  if (opts.likert_max) q.likert_max = *opts.likert_max;
  if (!(q.likert_min < q.likert_max)) throw fail("likert_min must be below likert_max");

  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::strip(line).empty() || detail::strip(line)[0] == '#') continue;
    const auto f = detail::split_record(line, delim);
    if (f.size() < header.size()) throw fail("expected " + std::to_string(header.size()) + " fields");
    Item item;
    item.id = detail::strip(f[c_id]);
    item.text = detail::strip(f[c_text]);
    if (item.id.empty()) throw fail("empty item id");
    if (item.text.empty()) throw fail("empty item text");
    if (!seen.insert(item.id).second) throw fail("duplicate item id '" + item.id + "'");
    const auto trait = find_trait(detail::lower(detail::strip(f[c_trait])));
    if (!trait) throw fail("unknown trait '" + detail::strip(f[c_trait]) + "'");
    item.trait = *trait;
    if (c_facet) {
      const auto facet_name = detail::lower(detail::strip(f[*c_facet]));
      if (!facet_name.empty()) {
        const auto facet = find_facet(facet_name);
        if (!facet) throw fail("unknown facet '" + facet_name + "'");
        if (facet_parent(*facet) != item.trait)
          throw fail("facet '" + facet_name + "' does not belong to " + std::string(trait_name(item.trait)));
        item.facet = facet;
      }
    }
    const auto rev = detail::strip(f[c_rev]);
    if (rev == "1") item.reverse_keyed = true;
    else if (rev == "0" || rev.empty()) item.reverse_keyed = false;
    else throw fail("reverse must be 0 or 1, got '" + rev + "'");
    q.items.push_back(std::move(item));
  }
  if (q.items.empty()) throw LoadError(source + ": item bank has no items");
  return q;
}

inline Questionnaire load_questionnaire(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read questionnaire " + path.string());
  auto q = read_questionnaire(in, path.string(), opts);
  if (!opts.name && q.name == path.string()) q.name = path.stem().string();
  return q;
}

// ---- answer parsing ----

// Accepts "3", "(3)", "option 3", or a sentence whose first line names one
// integer. Several distinct integers, none, or out of range -> ParseError.
inline int parse_likert(std::string_view text, int likert_min, int likert_max) {
  std::string first;
  {
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);) {
      if (!detail::strip(l).empty()) {
        first = l;
        break;
      }
    }
  }
  std::set<long long> candidates;
  for (std::size_t i = 0; i < first.size();) {
    if (std::isdigit(static_cast<unsigned char>(first[i]))) {
      std::size_t j = i;
      while (j < first.size() && std::isdigit(static_cast<unsigned char>(first[j]))) ++j;
      if (j - i > 9) throw ParseError("number too long in answer");
      candidates.insert(std::stoll(first.substr(i, j - i)));
      i = j;
    } else {
      ++i;
    }
  }
  if (candidates.empty()) throw ParseError("no rating found in answer");
  if (candidates.size() > 1) throw ParseError("ambiguous answer: several ratings");
  const long long v = *candidates.begin();
  if (v < likert_min || v > likert_max)
    throw ParseError("rating " + std::to_string(v) + " outside [" + std::to_string(likert_min) + ", " +
                     std::to_string(likert_max) + "]");
  return static_cast<int>(v);
}

inline constexpr std::string_view kLikertInstructionVersion = "likert-v1";
inline constexpr std::string_view kLikertInstruction =
    "Read the following statement and rate how accurately it describes you.\n"
    "Statement: \"{statement}\"\n"
    "Options:\n"
    "{options}\n"
    "Answer with only the number of your choice.";

inline std::string likert_options(int lo, int hi) {
  std::ostringstream os;
  if (hi - lo == 4) {
    constexpr std::array<const char*, 5> anchors = {"Very inaccurate", "Moderately inaccurate",
                                                    "Neither accurate nor inaccurate", "Moderately accurate",
                                                    "Very accurate"};
    for (int k = 0; k < 5; ++k) os << (k ? "\n" : "") << lo + k << " = " << anchors[static_cast<std::size_t>(k)];
    return os.str();
  }
  for (int v = lo; v <= hi; ++v) {
    os << (v > lo ? "\n" : "") << v;
    if (v == lo) os << " = Very inaccurate";
    else if (v == hi) os << " = Very accurate";
    else if ((hi - lo) % 2 == 0 && v == lo + (hi - lo) / 2) os << " = Neither accurate nor inaccurate";
  }
  return os.str();
}

inline std::string render_likert_item(const Item& item, int lo, int hi,
                                      std::string_view instruction = kLikertInstruction) {
  std::string out(instruction);
  auto replace = [&](std::string_view key, const std::string& value) {
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size()))
      out.replace(pos, key.size(), value);
  };
  replace("{statement}", item.text);
  replace("{options}", likert_options(lo, hi));
  return out;
}

// ---- administration ----

struct ItemResponse {
  std::string item_id;
  std::string raw;  // last reply received
  std::optional<int> rating;
  int attempts = 0;
  std::string note;  // why the item is missing
};

struct ResponseSet {
  std::string questionnaire;
  std::vector<ItemResponse> items;  // questionnaire order
  bool unreliable = false;

  std::size_t missing() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const auto& r) { return !r.rating; }));
  }
  double missing_fraction() const {
    return items.empty() ? 0.0 : static_cast<double>(missing()) / static_cast<double>(items.size());
  }
};

struct AdministerOptions {
  GenerationParams params;
  int parse_retries = 2;
  std::uint64_t seed = 0;
  bool shuffle = false;
  double missing_threshold = 0.10;
};

inline ResponseSet administer(const PersonaPrompt& persona, const Questionnaire& q, Gateway& gateway,
                              const AdministerOptions& opts = {}) {
  ResponseSet out;
  out.questionnaire = q.name;
  out.items.resize(q.items.size());

  std::vector<std::size_t> order(q.items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (opts.shuffle) {
    std::mt19937_64 rng(detail::derive_seed(opts.seed, "item-order"));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1))]);
  }

  detail::parallel_for(order.size(), gateway.parallelism(), [&](std::size_t k) {
    const Item& item = q.items[order[k]];
    ItemResponse& resp = out.items[order[k]];
    resp.item_id = item.id;

    ChatRequest req;
    if (!persona.empty()) req.messages.push_back({Role::system, persona.text});
    req.messages.push_back({Role::user, render_likert_item(item, q.likert_min, q.likert_max)});
    req.params = opts.params;
    req.tags.kind = RequestKind::likert;
    req.tags.trait = item.trait;
    req.tags.reverse_keyed = item.reverse_keyed;
    req.tags.likert_min = q.likert_min;
    req.tags.likert_max = q.likert_max;

    for (int attempt = 0; attempt <= opts.parse_retries; ++attempt) {
      ++resp.attempts;
      try {
        resp.raw = gateway.complete(req);
      } catch (const Error& e) {
        resp.note = e.what();
        return;
      }
      try {
        resp.rating = parse_likert(resp.raw, q.likert_min, q.likert_max);
        resp.note.clear();
        return;
      } catch (const ParseError& e) {
        resp.note = e.what();
      }
    }
  });

  out.unreliable = out.missing_fraction() > opts.missing_threshold;
  return out;
}

// ---- scoring ----

enum class VarianceKind { population, sample };

inline int reverse_rating(int rating, int likert_min, int likert_max) { return likert_min + likert_max - rating; }

struct TraitScore {
  double mean = 0;
  double variance = 0;
  std::size_t answered = 0;
  std::size_t missing = 0;
  double sd() const { return std::sqrt(variance); }
};

struct TraitReport {
  std::string questionnaire;
  int likert_min = 1;
  int likert_max = 5;
  std::map<Trait, TraitScore> traits;  // traits with at least one answer
  std::vector<Trait> flagged;          // traits with items but no answers
  bool unreliable = false;

  bool has(Trait t) const { return traits.count(t) != 0; }
  const TraitScore& at(Trait t) const {
    const auto it = traits.find(t);
    if (it == traits.end()) throw InputError("no score for " + std::string(trait_name(t)));
    return it->second;
  }
};

inline TraitReport score(const ResponseSet& responses, const Questionnaire& q,
                         VarianceKind variance = VarianceKind::population) {
  std::map<std::string, const Item*> by_id;
  for (const auto& item : q.items) by_id[item.id] = &item;

  std::map<Trait, std::vector<int>> ratings;
  std::map<Trait, std::size_t> missing;
  for (const auto& r : responses.items) {
    const auto it = by_id.find(r.item_id);
    if (it == by_id.end()) throw InputError("response for unknown item '" + r.item_id + "'");
    const Item& item = *it->second;
    if (!r.rating) {
      ++missing[item.trait];
      continue;
    }
    if (*r.rating < q.likert_min || *r.rating > q.likert_max)
      throw RangeError("rating for item " + item.id + " outside the Likert range");
    ratings[item.trait].push_back(item.reverse_keyed ? reverse_rating(*r.rating, q.likert_min, q.likert_max)
                                                     : *r.rating);
  }

  TraitReport report;
  report.questionnaire = q.name;
  report.likert_min = q.likert_min;
  report.likert_max = q.likert_max;
  report.unreliable = responses.unreliable;
  for (Trait t : kTraits) {
    const auto& xs = ratings[t];
    if (xs.empty()) {
      if (missing[t] > 0) report.flagged.push_back(t);
      continue;
    }
    TraitScore s;
    s.answered = xs.size();
    s.missing = missing[t];
    const double n = static_cast<double>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0;
    for (int x : xs) ss += (x - s.mean) * (x - s.mean);
    const double denom = variance == VarianceKind::population ? n : n - 1;
    s.variance = denom > 0 ? ss / denom : 0.0;
    report.traits[t] = s;
  }
  return report;
}

inline nlohmann::json to_json(const ResponseSet& rs) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : rs.items) {
    nlohmann::json j = {{"id", r.item_id}, {"raw", r.raw}, {"attempts", r.attempts}};
    j["rating"] = r.rating ? nlohmann::json(*r.rating) : nlohmann::json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    items.push_back(std::move(j));
  }
  return {{"questionnaire", rs.questionnaire}, {"unreliable", rs.unreliable}, {"items", items}};
}

inline nlohmann::json to_json(const TraitReport& r) {
  nlohmann::json traits = nlohmann::json::object();
  for (const auto& [t, s] : r.traits)
    traits[std::string(trait_name(t))] = {
        {"mean", s.mean}, {"variance", s.variance}, {"answered", s.answered}, {"missing", s.missing}};
  nlohmann::json flagged = nlohmann::json::array();
  for (Trait t : r.flagged) flagged.push_back(std::string(trait_name(t)));
  return {{"questionnaire", r.questionnaire},
          {"likert_min", r.likert_min},
          {"likert_max", r.likert_max},
          {"traits", traits},
          {"flagged", flagged},
          {"unreliable", r.unreliable}};
}

}  // namespace big5
