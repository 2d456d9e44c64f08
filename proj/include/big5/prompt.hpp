#pragma once

// Persona prompt rendering: the three scaler templates (simple, specific,
// simspec), their single-trait cuts, and the naive / neutral baselines.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "big5/errors.hpp"
#include "big5/persona.hpp"
#include "big5/prompt_templates.hpp"

namespace big5 {

enum class PromptKind { simple, specific, simspec, naive, neutral };

inline constexpr std::array<PromptKind, 3> kScalerKinds = {PromptKind::simple, PromptKind::specific,
                                                           PromptKind::simspec};

inline constexpr std::string_view prompt_kind_name(PromptKind k) {
  constexpr std::array<std::string_view, 5> names = {"simple", "specific", "simspec", "naive", "neutral"};
  return names[static_cast<std::size_t>(k)];
}

inline PromptKind parse_prompt_kind(std::string_view name) {
  for (auto k : {PromptKind::simple, PromptKind::specific, PromptKind::simspec, PromptKind::naive,
                 PromptKind::neutral})
    if (prompt_kind_name(k) == name) return k;
  throw NameError("unknown prompt kind '" + std::string(name) + "'");
}

inline bool is_scaler_kind(PromptKind k) {
  return k == PromptKind::simple || k == PromptKind::specific || k == PromptKind::simspec;
}

inline constexpr std::string_view kClosingInstruction =
    "From now on, you are an agent with this personality, and you should respond based on this personality.";

struct PersonaPrompt {
  std::string text;
  PromptKind kind;
  TraitScale scale;
  std::variant<std::monostate, BigFiveProfile, FacetProfile> source;
  std::optional<Trait> single_trait;

  bool empty() const { return text.empty(); }
};

// "original" keeps the original spellings ("compilance", "self-disciplinel");
// "corrected" fixes them.
enum class TemplateVariant { original, corrected };

class PromptTemplate {
 public:
  struct Line {
    std::string text;
    std::vector<std::string> placeholders;  // excluding {n}
    std::optional<Trait> trait;             // owner of the placeholders, if any
  };

  explicit PromptTemplate(std::string_view text) {
    std::string body(text);
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    std::istringstream in(body);
    for (std::string raw; std::getline(in, raw);) lines_.push_back(classify(std::move(raw)));
    if (lines_.empty() || lines_.back().text != kClosingInstruction)
      throw LoadError("template does not end with the closing instruction");
  }

  const std::vector<Line>& lines() const { return lines_; }
  std::size_t line_count() const { return lines_.size(); }

  std::string render(const FacetProfile& facets) const {
    std::string out;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      if (i) out += '\n';
      out += substitute(lines_[i].text, facets);
    }
    return out;
  }

  // Only the score lines owned by one trait, then the closing instruction.
  std::string render_trait(Trait trait, const FacetProfile& facets) const {
    std::string out;
    for (const auto& line : lines_) {
      if (line.trait != trait) continue;
      if (!out.empty()) out += '\n';
      out += substitute(line.text, facets);
    }
    if (out.empty()) throw LoadError("template has no lines for " + std::string(trait_name(trait)));
    out += "\n\n";
    out += lines_.back().text;
    return out;
  }

 private:
  static Line classify(std::string text) {
    Line line{std::move(text), {}, std::nullopt};
    for (std::size_t pos = line.text.find('{'); pos != std::string::npos; pos = line.text.find('{', pos + 1)) {
      const auto close = line.text.find('}', pos);
      if (close == std::string::npos) throw LoadError("unterminated placeholder in template");
      std::string name = line.text.substr(pos + 1, close - pos - 1);
      if (name == "n") continue;
      Trait owner;
      if (auto t = find_trait(name)) {
        owner = *t;
      } else if (auto f = find_facet(name)) {
        owner = facet_parent(*f);
      } else {
        throw LoadError("template placeholder {" + name + "} is not a trait or facet");
      }
      if (line.trait && *line.trait != owner) throw LoadError("template line mixes traits");
      line.trait = owner;
      line.placeholders.push_back(std::move(name));
    }
    return line;
  }

  static std::string substitute(const std::string& text, const FacetProfile& facets) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] != '{') {
        out += text[i++];
        continue;
      }
      const auto close = text.find('}', i);
      const std::string name = text.substr(i + 1, close - i - 1);
      if (name == "n") {
        out += std::to_string(facets.scale().n());
      } else if (auto t = find_trait(name)) {
        out += std::to_string(facets[*t]);
      } else {
        out += std::to_string(facets[parse_facet(name)]);
      }
      i = close + 1;
    }
    return out;
  }

  std::vector<Line> lines_;
};

class TemplateSet {
 public:
  static TemplateSet builtin(TemplateVariant variant = TemplateVariant::original) {
    return TemplateSet(std::string(templates::kSimple), std::string(templates::kSpecific),
                       std::string(templates::kSimspec), variant);
  }

  // Reads simple.txt, specific.txt and simspec.txt from a directory.
  static TemplateSet from_directory(const std::filesystem::path& dir,
                                    TemplateVariant variant = TemplateVariant::original) {
    auto slurp = [&](const char* file) {
      std::ifstream in(dir / file, std::ios::binary);
      if (!in) throw LoadError("cannot read template " + (dir / file).string());
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    return TemplateSet(slurp("simple.txt"), slurp("specific.txt"), slurp("simspec.txt"), variant);
  }

  const PromptTemplate& get(PromptKind kind) const {
    switch (kind) {
      case PromptKind::simple: return simple_;
      case PromptKind::specific: return specific_;
      case PromptKind::simspec: return simspec_;
      default: throw ConsistencyError("no template for prompt kind " + std::string(prompt_kind_name(kind)));
    }
  }

 private:
  TemplateSet(std::string simple, std::string specific, std::string simspec, TemplateVariant variant)
      : simple_(apply(std::move(simple), variant)),
        specific_(apply(std::move(specific), variant)),
        simspec_(apply(std::move(simspec), variant)) {}

  static std::string apply(std::string text, TemplateVariant variant) {
    if (variant == TemplateVariant::original) return text;
    for (auto [from, to] : {std::pair<std::string_view, std::string_view>{"compilance", "compliance"},
                            {"self-disciplinel", "self-discipline"}}) {
      for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size()))
        text.replace(pos, from.size(), to);
    }
    return text;
  }

  PromptTemplate simple_;
  PromptTemplate specific_;
  PromptTemplate simspec_;
};

inline const TemplateSet& default_templates() {
  static const TemplateSet set = TemplateSet::builtin();
  return set;
}

inline PersonaPrompt build_neutral_prompt(TraitScale scale = TraitScale(100)) {
  return PersonaPrompt{"", PromptKind::neutral, scale, std::monostate{}, std::nullopt};
}

// "You are a/an X person." with the article chosen by the adjective's first sound.
inline PersonaPrompt build_naive_prompt(Trait trait) {
  const std::string_view adjective = trait_adjective(trait);
  const bool vowel = std::string_view("aeiou").find(adjective.front()) != std::string_view::npos;
  std::string text = std::string("You are ") + (vowel ? "an " : "a ") + std::string(adjective) + " person.";
  return PersonaPrompt{std::move(text), PromptKind::naive, TraitScale(100), std::monostate{}, trait};
}

inline PersonaPrompt build_naive_prompt(std::string_view trait) { return build_naive_prompt(parse_trait(trait)); }

inline PersonaPrompt build_prompt(PromptKind kind, const FacetProfile& facets, TraitScale scale,
                                  const TemplateSet& templates = default_templates()) {
  if (kind == PromptKind::neutral) return build_neutral_prompt(scale);
  if (kind == PromptKind::naive)
    throw ConsistencyError("naive prompts target a single trait; use build_naive_prompt");
  if (!(facets.scale() == scale))
    throw ConsistencyError("profile scale " + std::to_string(facets.scale().n()) +
                           " does not match requested scale " + std::to_string(scale.n()));
  return PersonaPrompt{templates.get(kind).render(facets), kind, scale, facets, std::nullopt};
}

inline PersonaPrompt build_prompt(PromptKind kind, const BigFiveProfile& profile,
                                  const TemplateSet& templates = default_templates()) {
  return build_prompt(kind, expand_profile(profile), profile.scale(), templates);
}

// Only the target trait is described; the other four are omitted.
inline PersonaPrompt build_single_trait_prompt(PromptKind kind, Trait trait, int value, TraitScale scale,
                                               const TemplateSet& templates = default_templates()) {
  if (kind == PromptKind::neutral) return build_neutral_prompt(scale);
  if (kind == PromptKind::naive) return build_naive_prompt(trait);
  if (!scale.contains(value))
    throw RangeError("value " + std::to_string(value) + " outside [0, " + std::to_string(scale.n()) + "]");
  const auto facets = expand_profile(BigFiveProfile::uniform(0, scale).with(trait, value));
  return PersonaPrompt{templates.get(kind).render_trait(trait, facets), kind, scale, facets, trait};
}

inline PersonaPrompt build_single_trait_prompt(PromptKind kind, std::string_view trait, int value,
                                               TraitScale scale,
                                               const TemplateSet& templates = default_templates()) {
  return build_single_trait_prompt(kind, parse_trait(trait), value, scale, templates);
}

}  // namespace big5
