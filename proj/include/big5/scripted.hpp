#pragma once

// Deterministic offline backends. Every reply is a pure function of the
// request, which makes downstream statistics analytically predictable.
//
// Behaviors:
//   echo-last             last user message, verbatim
//   constant:<text>       always <text>
//   persona-linear        Likert: clamp(lo + floor(s*k/n), lo, hi) for the
//                         item's trait (k = number of options, mirrored for
//                         reverse-keyed items, midpoint when the persona has
//                         no score); dialogue: a fixed sentence with the
//                         speaker's trait values and the turn index;
//                         judge: same as judge-oracle
//   judge-always:<label>  always A, B or similar
//   judge-random          uniform over {A, B, similar}, hashed from the request
//   judge-oracle          reads persona-linear utterances from the transcript

#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "big5/gateway.hpp"
#include "big5/persona.hpp"
#include "big5/rational.hpp"

namespace big5 {

// Scores parsed from "Your <name> score is <s> out of <n>." sentences.
struct DeclaredScores {
  std::map<Trait, Rational> trait;                 // trait sentences
  std::map<Trait, std::vector<Rational>> facets;   // facet sentences, as fractions of n

  // Trait sentence if present, else the mean of that trait's facet sentences; as s/n.
  std::optional<Rational> fraction(Trait t) const {
    if (auto it = trait.find(t); it != trait.end()) return it->second;
    if (auto it = facets.find(t); it != facets.end() && !it->second.empty()) {
      Rational sum(0);
      for (const auto& v : it->second) sum = sum + v;
      return sum / Rational(static_cast<std::int64_t>(it->second.size()));
    }
    return std::nullopt;
  }

  bool empty() const { return trait.empty() && facets.empty(); }
};

// Maps template spellings ("self-disciplinel", "positive emotions") to
// registry names.
inline std::string normalize_score_name(std::string name) {
  for (auto& c : name) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '-' || c == ' ') c = '_';
  }
  if (name == "compilance") return "compliance";
  if (name == "self_disciplinel") return "self_discipline";
  return name;
}

inline DeclaredScores parse_declared_scores(const std::string& text) {
  static const std::regex sentence(R"(Your ([A-Za-z -]+?) score is (\d+) out of (\d+)\.)");
  DeclaredScores out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), sentence); it != std::sregex_iterator(); ++it) {
    const std::string name = normalize_score_name((*it)[1].str());
    const std::int64_t s = std::stoll((*it)[2].str());
    const std::int64_t n = std::stoll((*it)[3].str());
    if (n <= 0) continue;
    const Rational frac(s, n);
    if (auto t = find_trait(name)) out.trait[*t] = frac;
    else if (auto f = find_facet(name)) out.facets[facet_parent(*f)].push_back(frac);
  }
  return out;
}

// Answer of the persona-linear oracle for a Likert item.
inline int persona_linear_rating(const std::optional<Rational>& fraction, int lo, int hi, bool reverse_keyed) {
  int answer;
  if (fraction) {
    const std::int64_t options = hi - lo + 1;
    const std::int64_t raw = lo + (*fraction * Rational(options)).floor();
    answer = static_cast<int>(std::clamp<std::int64_t>(raw, lo, hi));
  } else {
    answer = lo + (hi - lo) / 2;
  }
  return reverse_keyed ? lo + hi - answer : answer;
}

// Fixed-shape dialogue line produced by the persona-linear oracle.
inline std::string persona_linear_utterance(const DeclaredScores& scores, std::size_t turn, int scale_n) {
  std::ostringstream os;
  os << "Turn " << turn << ": ";
  bool any = false;
  for (Trait t : kTraits) {
    const auto frac = scores.fraction(t);
    if (!frac) continue;
    os << (any ? ", " : "my ") << trait_name(t) << " is " << (*frac * Rational(scale_n)).to_report_string();
    any = true;
  }
  if (!any) return os.str() + "I have no particular personality.";
  os << " out of " << scale_n << ".";
  return os.str();
}

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::string behavior) : behavior_(std::move(behavior)) {
    if (behavior_ == "echo-last" || behavior_ == "persona-linear" || behavior_ == "judge-random" ||
        behavior_ == "judge-oracle")
      return;
    if (behavior_.rfind("constant:", 0) == 0) return;
    if (behavior_.rfind("judge-always:", 0) == 0) {
      const auto label = behavior_.substr(13);
      if (label == "A" || label == "B" || label == "similar") return;
    }
    throw ConfigError("unknown scripted behavior '" + behavior_ + "'");
  }

  std::string identifier() const override { return "scripted:" + behavior_; }

  std::string complete(const ChatRequest& request) override {
    const auto& msgs = request.messages;
    if (behavior_ == "echo-last") {
      for (auto it = msgs.rbegin(); it != msgs.rend(); ++it)
        if (it->role == Role::user) return it->content;
      return {};
    }
    if (behavior_.rfind("constant:", 0) == 0) return behavior_.substr(9);
    if (behavior_.rfind("judge-always:", 0) == 0) return behavior_.substr(13);
    if (behavior_ == "judge-random") {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (const auto& m : msgs) h = detail::fnv1a(m.content, detail::fnv1a(role_name(m.role), h));
      constexpr std::array<const char*, 3> labels = {"A", "B", "similar"};
      return labels[detail::splitmix64(h) % 3];
    }
    if (behavior_ == "judge-oracle" ||
        (behavior_ == "persona-linear" && request.tags.kind == RequestKind::judge))
      return judge_oracle(request);
    return persona_linear(request);
  }

 private:
  static std::string persona_linear(const ChatRequest& request) {
    const auto& msgs = request.messages;
    const std::string system = (!msgs.empty() && msgs.front().role == Role::system) ? msgs.front().content : "";
    const auto scores = parse_declared_scores(system);
    const auto& tags = request.tags;
    if (tags.kind == RequestKind::likert) {
      std::optional<Rational> frac;
      if (tags.trait) frac = scores.fraction(*tags.trait);
      return std::to_string(persona_linear_rating(frac, tags.likert_min, tags.likert_max, tags.reverse_keyed));
    }
    std::size_t turn = 0;
    for (const auto& m : msgs)
      if (m.role != Role::system) ++turn;
    static const std::regex out_of(R"(out of (\d+)\.)");
    std::smatch m;
    int n = 100;
    if (std::regex_search(system, m, out_of)) n = std::stoi(m[1].str());
    return persona_linear_utterance(scores, turn, n);
  }

  // Compares the asked trait across "Agent A:" / "Agent B:" transcript lines.
  static std::string judge_oracle(const ChatRequest& request) {
    if (!request.tags.trait) return "similar";
    const Trait trait = *request.tags.trait;
    const std::regex value(std::string(trait_name(trait)) + R"( is (\d+(?:\.\d)?))");
    std::optional<double> a, b;
    for (const auto& msg : request.messages) {
      std::istringstream in(msg.content);
      for (std::string line; std::getline(in, line);) {
        std::optional<double>* slot = nullptr;
        if (line.rfind("Agent A:", 0) == 0) slot = &a;
        else if (line.rfind("Agent B:", 0) == 0) slot = &b;
        if (!slot || *slot) continue;
        std::smatch m;
        if (std::regex_search(line, m, value)) *slot = std::stod(m[1].str());
      }
    }
    if (!a || !b || *a == *b) return "similar";
    return *a > *b ? "A" : "B";
  }

  std::string behavior_;
};

}  // namespace big5
