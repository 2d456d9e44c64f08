#pragma once

// Trait and facet vocabulary, integer trait profiles on a scale n, score
// rescaling, and seeded random profiles.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "big5/detail/random.hpp"
#include "big5/errors.hpp"
#include "big5/rational.hpp"

namespace big5 {

enum class Trait { openness, conscientiousness, extraversion, agreeableness, neuroticism };

inline constexpr std::array<Trait, 5> kTraits = {Trait::openness, Trait::conscientiousness,
                                                 Trait::extraversion, Trait::agreeableness,
                                                 Trait::neuroticism};

enum class Facet {
  fantasy, aesthetics, feelings, actions, ideas, values,
  competence, order, dutifulness, achievement_striving, self_discipline, deliberation,
  warmth, gregariousness, assertiveness, activity, excitement_seeking, positive_emotions,
  trust, straightforwardness, altruism, compliance, modesty, tender_mindedness,
  anxiety, angry_hostility, depression, self_consciousness, impulsiveness, vulnerability,
};

inline constexpr std::size_t kFacetCount = 30;
inline constexpr std::size_t kFacetsPerTrait = 6;

struct FacetDefinition {
  Facet facet;
  std::string_view name;
  Trait parent;
  std::string_view description;
};

// NEO PI-R facets, grouped by parent trait in O, C, E, A, N order.
inline constexpr std::array<FacetDefinition, kFacetCount> kFacetRegistry = {{
    {Facet::fantasy, "fantasy", Trait::openness, "Active imagination and creativity"},
    {Facet::aesthetics, "aesthetics", Trait::openness, "Appreciation for art and beauty"},
    {Facet::feelings, "feelings", Trait::openness, "Awareness and acceptance of emotions"},
    {Facet::actions, "actions", Trait::openness, "Willingness to try new activities"},
    {Facet::ideas, "ideas", Trait::openness, "Intellectual curiosity and open-mindedness"},
    {Facet::values, "values", Trait::openness,
     "Openness to re-evaluating social, political, or religious values"},
    {Facet::competence, "competence", Trait::conscientiousness,
     "Confidence in one's ability to accomplish tasks"},
    {Facet::order, "order", Trait::conscientiousness, "Preference for organization and tidiness"},
    {Facet::dutifulness, "dutifulness", Trait::conscientiousness,
     "Sense of moral obligation and responsibility"},
    {Facet::achievement_striving, "achievement_striving", Trait::conscientiousness,
     "High aspiration and goal orientation"},
    {Facet::self_discipline, "self_discipline", Trait::conscientiousness,
     "Ability to begin and complete tasks despite distractions"},
    {Facet::deliberation, "deliberation", Trait::conscientiousness,
     "Tendency to think carefully before acting"},
    {Facet::warmth, "warmth", Trait::extraversion, "Friendly and affectionate toward others"},
    {Facet::gregariousness, "gregariousness", Trait::extraversion, "Enjoyment of social interaction"},
    {Facet::assertiveness, "assertiveness", Trait::extraversion,
     "Confidence and dominance in social situations"},
    {Facet::activity, "activity", Trait::extraversion, "High energy and fast-paced lifestyle"},
    {Facet::excitement_seeking, "excitement_seeking", Trait::extraversion,
     "Desire for novelty and stimulation"},
    {Facet::positive_emotions, "positive_emotions", Trait::extraversion,
     "Tendency to experience joy and happiness"},
    {Facet::trust, "trust", Trait::agreeableness, "Belief in the sincerity and goodness of others"},
    {Facet::straightforwardness, "straightforwardness", Trait::agreeableness,
     "Direct and honest in communication"},
    {Facet::altruism, "altruism", Trait::agreeableness,
     "Concern for others' welfare and willingness to help"},
    {Facet::compliance, "compliance", Trait::agreeableness,
     "Tendency to cooperate rather than compete"},
    {Facet::modesty, "modesty", Trait::agreeableness, "Humility and lack of arrogance"},
    {Facet::tender_mindedness, "tender_mindedness", Trait::agreeableness,
     "Sympathy and compassion toward others"},
    {Facet::anxiety, "anxiety", Trait::neuroticism, "Susceptibility to worry and fear"},
    {Facet::angry_hostility, "angry_hostility", Trait::neuroticism,
     "Tendency to experience anger and frustration"},
    {Facet::depression, "depression", Trait::neuroticism, "Feelings of sadness and hopelessness"},
    {Facet::self_consciousness, "self_consciousness", Trait::neuroticism,
     "Sensitivity to social judgment and embarrassment"},
    {Facet::impulsiveness, "impulsiveness", Trait::neuroticism,
     "Difficulty in controlling urges and desires"},
    {Facet::vulnerability, "vulnerability", Trait::neuroticism,
     "Difficulty coping with stress and pressure"},
}};

inline constexpr std::string_view trait_name(Trait t) {
  constexpr std::array<std::string_view, 5> names = {"openness", "conscientiousness",
                                                     "extraversion", "agreeableness", "neuroticism"};
  return names[static_cast<std::size_t>(t)];
}

// Adjective form used by the naive "You are a/an X person." baseline.
inline constexpr std::string_view trait_adjective(Trait t) {
  constexpr std::array<std::string_view, 5> adjectives = {"open", "conscientious", "extraverted",
                                                          "agreeable", "neurotic"};
  return adjectives[static_cast<std::size_t>(t)];
}

inline constexpr const FacetDefinition& facet_definition(Facet f) {
  return kFacetRegistry[static_cast<std::size_t>(f)];
}
inline constexpr std::string_view facet_name(Facet f) { return facet_definition(f).name; }
inline constexpr Trait facet_parent(Facet f) { return facet_definition(f).parent; }

// The six facets of a trait, in registry order.
inline std::span<const FacetDefinition, kFacetsPerTrait> facets_of(Trait t) {
  return std::span<const FacetDefinition, kFacetsPerTrait>(
      kFacetRegistry.data() + static_cast<std::size_t>(t) * kFacetsPerTrait, kFacetsPerTrait);
}

inline std::optional<Trait> find_trait(std::string_view name) {
  for (Trait t : kTraits)
    if (trait_name(t) == name || trait_adjective(t) == name) return t;
  return std::nullopt;
}

inline Trait parse_trait(std::string_view name) {
  if (auto t = find_trait(name)) return *t;
  throw NameError("unknown trait '" + std::string(name) + "'");
}

inline std::optional<Facet> find_facet(std::string_view name) {
  for (const auto& def : kFacetRegistry)
    if (def.name == name) return def.facet;
  return std::nullopt;
}

inline Facet parse_facet(std::string_view name) {
  if (auto f = find_facet(name)) return *f;
  throw NameError("unknown facet '" + std::string(name) + "'");
}

// Maximum trait intensity n; values live in [0, n].
class TraitScale {
 public:
  explicit TraitScale(int n) : n_(n) {
    if (n < 1) throw RangeError("trait scale must be >= 1, got " + std::to_string(n));
  }
  int n() const { return n_; }
  bool contains(std::int64_t v) const { return v >= 0 && v <= n_; }
  bool is_standard_grid() const { return n_ == 10 || n_ == 25 || n_ == 50 || n_ == 100; }
  friend bool operator==(const TraitScale&, const TraitScale&) = default;

 private:
  int n_;
};

inline const std::array<TraitScale, 4> kGridScales = {TraitScale(10), TraitScale(25), TraitScale(50),
                                                      TraitScale(100)};

class BigFiveProfile {
 public:
  BigFiveProfile(std::array<int, 5> values, TraitScale scale) : values_(values), scale_(scale) {
    for (Trait t : kTraits) check(t, values_[idx(t)]);
  }

  // Every trait at the same value.
  static BigFiveProfile uniform(int value, TraitScale scale) {
    return BigFiveProfile({value, value, value, value, value}, scale);
  }

  int operator[](Trait t) const { return values_[idx(t)]; }
  const TraitScale& scale() const { return scale_; }
  const std::array<int, 5>& values() const { return values_; }

  BigFiveProfile with(Trait t, int value) const {
    auto copy = values_;
    copy[idx(t)] = value;
    return BigFiveProfile(copy, scale_);
  }

  friend bool operator==(const BigFiveProfile&, const BigFiveProfile&) = default;

 private:
  static std::size_t idx(Trait t) { return static_cast<std::size_t>(t); }
  void check(Trait t, int v) const {
    if (!scale_.contains(v))
      throw RangeError(std::string(trait_name(t)) + " value " + std::to_string(v) +
                       " outside [0, " + std::to_string(scale_.n()) + "]");
  }

  std::array<int, 5> values_;
  TraitScale scale_;
};

class FacetProfile {
 public:
  FacetProfile(std::array<int, kFacetCount> values, BigFiveProfile parent)
      : values_(values), parent_(std::move(parent)) {
    for (const auto& def : kFacetRegistry) {
      const int v = values_[static_cast<std::size_t>(def.facet)];
      if (!scale().contains(v))
        throw RangeError("facet " + std::string(def.name) + " value " + std::to_string(v) +
                         " outside [0, " + std::to_string(scale().n()) + "]");
    }
  }

  int operator[](Facet f) const { return values_[static_cast<std::size_t>(f)]; }
  int operator[](Trait t) const { return parent_[t]; }
  const BigFiveProfile& parent() const { return parent_; }
  const TraitScale& scale() const { return parent_.scale(); }
  const std::array<int, kFacetCount>& values() const { return values_; }

  friend bool operator==(const FacetProfile&, const FacetProfile&) = default;

 private:
  std::array<int, kFacetCount> values_;
  BigFiveProfile parent_;
};

using FacetOverrides = std::map<std::string, int, std::less<>>;

// Facets inherit their parent trait's value unless overridden by name.
inline FacetProfile expand_profile(const BigFiveProfile& profile, const FacetOverrides& overrides = {}) {
  std::array<int, kFacetCount> values{};
  for (const auto& def : kFacetRegistry) values[static_cast<std::size_t>(def.facet)] = profile[def.parent];
  for (const auto& [name, value] : overrides) {
    const auto facet = find_facet(name);
    if (!facet) throw NameError("override names unknown facet '" + name + "'");
    if (!profile.scale().contains(value))
      throw RangeError("override " + name + "=" + std::to_string(value) + " outside [0, " +
                       std::to_string(profile.scale().n()) + "]");
    values[static_cast<std::size_t>(*facet)] = value;
  }
  return FacetProfile(values, profile);
}

inline Rational rescale(std::int64_t value, TraitScale from, TraitScale to) {
  if (!from.contains(value))
    throw RangeError("value " + std::to_string(value) + " outside [0, " + std::to_string(from.n()) + "]");
  return Rational(value * to.n(), from.n());
}

inline Rational rescale(const Rational& value, TraitScale from, TraitScale to) {
  if (value < Rational(0) || value > Rational(from.n()))
    throw RangeError("value outside [0, " + std::to_string(from.n()) + "]");
  return value * Rational(to.n(), from.n());
}

// Affine map of a questionnaire score on [lo, hi] onto [0, n].
inline Rational rescale_likert(const Rational& score, const Rational& lo, const Rational& hi, TraitScale target) {
  if (!(lo < hi)) throw RangeError("degenerate Likert range");
  if (score < lo || score > hi) throw RangeError("Likert score outside its range");
  return (score - lo) / (hi - lo) * Rational(target.n());
}

inline double rescale_likert(double score, double lo, double hi, TraitScale target) {
  if (!(lo < hi)) throw RangeError("degenerate Likert range");
  if (score < lo || score > hi) throw RangeError("Likert score outside its range");
  return (score - lo) / (hi - lo) * target.n();
}

// Five independent uniform draws over [0, n].
inline BigFiveProfile random_profile(std::uint64_t seed, TraitScale scale) {
  std::mt19937_64 rng(seed);
  std::array<int, 5> values{};
  for (auto& v : values) v = static_cast<int>(detail::uniform_int(rng, 0, scale.n()));
  return BigFiveProfile(values, scale);
}

// Flat key->integer maps used in config and report files.

inline nlohmann::json to_json(const BigFiveProfile& p) {
  nlohmann::json j = nlohmann::json::object();
  for (Trait t : kTraits) j[std::string(trait_name(t))] = p[t];
  return j;
}

inline nlohmann::json facets_to_json(const FacetProfile& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& def : kFacetRegistry) j[std::string(def.name)] = p[def.facet];
  return j;
}

inline BigFiveProfile profile_from_json(const nlohmann::json& j, TraitScale scale) {
  if (!j.is_object()) throw ConfigError("profile must be an object of trait -> integer");
  std::array<int, 5> values{};
  for (Trait t : kTraits) {
    const auto key = std::string(trait_name(t));
    if (!j.contains(key) || !j[key].is_number_integer())
      throw ConfigError("profile is missing integer '" + key + "'");
    values[static_cast<std::size_t>(t)] = j[key].get<int>();
  }
  for (const auto& [key, _] : j.items())
    if (!find_trait(key) && !find_facet(key)) throw NameError("unknown profile key '" + key + "'");
  return BigFiveProfile(values, scale);
}

// Facet keys found alongside trait keys become overrides.
inline FacetOverrides facet_overrides_from_json(const nlohmann::json& j) {
  FacetOverrides out;
  for (const auto& [key, value] : j.items())
    if (find_facet(key)) out[key] = value.get<int>();
  return out;
}

}  // namespace big5
