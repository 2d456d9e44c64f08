#include <gtest/gtest.h>

#include "big5/persona.hpp"

using namespace big5;

TEST(Registry, ThirtyFacetsSixPerTrait) {
  EXPECT_EQ(kFacetRegistry.size(), 30u);
  for (Trait t : kTraits) {
    const auto facets = facets_of(t);
    ASSERT_EQ(facets.size(), 6u);
    for (const auto& def : facets) EXPECT_EQ(def.parent, t) << def.name;
  }
  EXPECT_EQ(facets_of(Trait::neuroticism)[0].facet, Facet::anxiety);
  EXPECT_EQ(facets_of(Trait::neuroticism)[5].facet, Facet::vulnerability);
}

TEST(Registry, NameLookups) {
  EXPECT_EQ(parse_trait("openness"), Trait::openness);
  EXPECT_EQ(parse_trait("extraverted"), Trait::extraversion);
  EXPECT_EQ(parse_facet("self_discipline"), Facet::self_discipline);
  EXPECT_THROW(parse_trait("grumpiness"), NameError);
  EXPECT_THROW(parse_facet("compilance"), NameError);
}

TEST(TraitScale, RejectsNonPositive) {
  EXPECT_THROW(TraitScale(0), RangeError);
  EXPECT_NO_THROW(TraitScale(1));
}

TEST(Profile, RangeChecked) {
  EXPECT_THROW(BigFiveProfile({0, 0, 0, 0, 101}, TraitScale(100)), RangeError);
  EXPECT_THROW(BigFiveProfile({-1, 0, 0, 0, 0}, TraitScale(100)), RangeError);
  EXPECT_NO_THROW(BigFiveProfile({10, 10, 10, 10, 10}, TraitScale(10)));
}

TEST(ExpandProfile, AllFiftyReplicates) {
  const auto f = expand_profile(BigFiveProfile::uniform(50, TraitScale(100)));
  for (const auto& def : kFacetRegistry) EXPECT_EQ(f[def.facet], 50);
}

TEST(ExpandProfile, OpennessOnly) {
  const auto f = expand_profile(BigFiveProfile({80, 0, 0, 0, 0}, TraitScale(100)));
  for (const auto& def : kFacetRegistry) EXPECT_EQ(f[def.facet], def.parent == Trait::openness ? 80 : 0) << def.name;
}

TEST(ExpandProfile, OverrideWins) {
  const auto f = expand_profile(BigFiveProfile({80, 0, 0, 0, 0}, TraitScale(100)), {{"fantasy", 10}});
  EXPECT_EQ(f[Facet::fantasy], 10);
  for (const auto& def : facets_of(Trait::openness)) {
    if (def.facet != Facet::fantasy) {
      EXPECT_EQ(f[def.facet], 80);
    }
  }
}

TEST(ExpandProfile, OverrideErrors) {
  const auto p = BigFiveProfile::uniform(5, TraitScale(10));
  try {
    expand_profile(p, {{"fantasia", 1}});
    FAIL();
  } catch (const NameError& e) {
    EXPECT_NE(std::string(e.what()).find("fantasia"), std::string::npos);
  }
  EXPECT_THROW(expand_profile(p, {{"fantasy", 11}}), RangeError);
}

TEST(Rescale, Examples) {
  EXPECT_EQ(rescale(5, TraitScale(10), TraitScale(100)), Rational(50));
  for (int n : {1, 7, 25, 100}) EXPECT_EQ(rescale(0, TraitScale(n), TraitScale(100)), Rational(0));
  EXPECT_EQ(rescale(25, TraitScale(25), TraitScale(100)), Rational(100));
  EXPECT_EQ(rescale(1, TraitScale(3), TraitScale(10)), Rational(10, 3));
  EXPECT_THROW(rescale(11, TraitScale(10), TraitScale(100)), RangeError);
}

TEST(Rescale, RoundTripExact) {
  for (int n : {10, 25, 50, 100})
    for (int m : {3, 10, 100})
      for (int v = 0; v <= n; ++v)
        EXPECT_EQ(rescale(rescale(v, TraitScale(n), TraitScale(m)), TraitScale(m), TraitScale(n)), Rational(v));
}

TEST(RescaleLikert, Examples) {
  const TraitScale h(100);
  EXPECT_EQ(rescale_likert(Rational(1), 1, 5, h), Rational(0));
  EXPECT_EQ(rescale_likert(Rational(5), 1, 5, h), Rational(100));
  EXPECT_EQ(rescale_likert(Rational(3), 1, 5, h), Rational(50));
  EXPECT_DOUBLE_EQ(rescale_likert(4.0, 1.0, 7.0, h), 50.0);
  EXPECT_THROW(rescale_likert(Rational(3), 3, 3, h), RangeError);
  EXPECT_THROW(rescale_likert(6.0, 1.0, 5.0, h), RangeError);
}

TEST(RandomProfile, Deterministic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    EXPECT_EQ(random_profile(seed, TraitScale(25)), random_profile(seed, TraitScale(25)));
  EXPECT_NE(random_profile(1, TraitScale(100)), random_profile(2, TraitScale(100)));
}

TEST(RandomProfile, UniformMean) {
  std::array<double, 5> sum{};
  std::array<int, 101> hist{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto p = random_profile(static_cast<std::uint64_t>(i) * 7919 + 1, TraitScale(100));
    for (std::size_t k = 0; k < 5; ++k) {
      sum[k] += p.values()[k];
      ++hist[static_cast<std::size_t>(p.values()[k])];
    }
  }
  for (double s : sum) EXPECT_NEAR(s / draws, 50.0, 2.0);
  EXPECT_GT(hist[0], 0);
  EXPECT_GT(hist[100], 0);
}

TEST(ProfileJson, RoundTrip) {
  const BigFiveProfile p({1, 2, 3, 4, 5}, TraitScale(10));
  const auto j = to_json(p);
  EXPECT_EQ(j["conscientiousness"], 2);
  EXPECT_EQ(profile_from_json(j, TraitScale(10)), p);
  auto with_facet = j;
  with_facet["trust"] = 9;
  EXPECT_EQ(facet_overrides_from_json(with_facet).at("trust"), 9);
  auto bad = j;
  bad["charisma"] = 3;
  EXPECT_THROW(profile_from_json(bad, TraitScale(10)), NameError);
  bad = j;
  bad.erase("neuroticism");
  EXPECT_THROW(profile_from_json(bad, TraitScale(10)), ConfigError);
  const auto facets = facets_to_json(expand_profile(p));
  EXPECT_EQ(facets.size(), 30u);
  EXPECT_EQ(facets["vulnerability"], 5);
}

TEST(RationalType, FloorAndReport) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(5, 2).round_half_up(), 3);
  EXPECT_EQ(Rational(100, 3).to_report_string(), "33.3");
  EXPECT_EQ(Rational(40).to_report_string(), "40");
  EXPECT_EQ(Rational(1, 4) + Rational(1, 4), Rational(1, 2));
  EXPECT_THROW(Rational(1, 0), RangeError);
}
