#include <gtest/gtest.h>

#include "big5/prompt.hpp"
#include "big5/scripted.hpp"
#include "oracles.hpp"

using namespace big5;

namespace {

ChatRequest likert(const std::string& persona, Trait trait, bool reverse, int lo = 1, int hi = 5) {
  ChatRequest r;
  if (!persona.empty()) r.messages.push_back({Role::system, persona});
  r.messages.push_back({Role::user, "Rate: I am someone."});
  r.tags.kind = RequestKind::likert;
  r.tags.trait = trait;
  r.tags.reverse_keyed = reverse;
  r.tags.likert_min = lo;
  r.tags.likert_max = hi;
  return r;
}

}  // namespace

TEST(PersonaLinear, SpecExample) {
  ScriptedBackend b("persona-linear");
  EXPECT_EQ(b.complete(likert("Your extraversion score is 80 out of 100.", Trait::extraversion, false)), "5");
  EXPECT_EQ(b.complete(likert("Your extraversion score is 80 out of 100.", Trait::extraversion, true)), "1");
}

TEST(PersonaLinear, MatchesHandTable) {
  // clamp(1 + floor(5s/100), 1, 5) for s = 0, 10, ..., 100
  const int table[] = {1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 5};
  ScriptedBackend b("persona-linear");
  for (int i = 0; i <= 10; ++i) {
    const int s = i * 10;
    const auto persona = build_prompt(PromptKind::simple, BigFiveProfile::uniform(s, TraitScale(100))).text;
    for (Trait t : kTraits) {
      EXPECT_EQ(b.complete(likert(persona, t, false)), std::to_string(table[i])) << s;
      EXPECT_EQ(b.complete(likert(persona, t, true)), std::to_string(6 - table[i])) << s;
    }
  }
}

TEST(PersonaLinear, AgreesWithOracleOnAllScalesAndRanges) {
  ScriptedBackend b("persona-linear");
  for (int n : {1, 3, 10, 25, 100})
    for (auto [lo, hi] : {std::pair{1, 5}, std::pair{1, 7}, std::pair{0, 10}})
      for (int s = 0; s <= n; ++s)
        for (PromptKind k : kScalerKinds) {
          const auto persona = build_prompt(k, BigFiveProfile::uniform(s, TraitScale(n))).text;
          EXPECT_EQ(b.complete(likert(persona, Trait::agreeableness, false, lo, hi)),
                    std::to_string(oracle::linear_rating(s, n, lo, hi)));
        }
}

TEST(PersonaLinear, NoScoresMeansMidpoint) {
  ScriptedBackend b("persona-linear");
  EXPECT_EQ(b.complete(likert("", Trait::openness, false)), "3");
  EXPECT_EQ(b.complete(likert("You are an open person.", Trait::openness, true)), "3");
  EXPECT_EQ(b.complete(likert("", Trait::openness, false, 1, 7)), "4");
}

TEST(PersonaLinear, FacetMeanWhenNoTraitSentence) {
  const auto facets = expand_profile(BigFiveProfile::uniform(0, TraitScale(100)),
                                     {{"anxiety", 100}, {"angry_hostility", 100}, {"depression", 100}});
  const auto persona = build_prompt(PromptKind::specific, facets, TraitScale(100)).text;
  // neuroticism facets average 50 -> floor(2.5) + 1 = 3
  EXPECT_EQ(ScriptedBackend("persona-linear").complete(likert(persona, Trait::neuroticism, false)), "3");
}

TEST(DeclaredScores, OriginalSpellings) {
  const auto facets = expand_profile(BigFiveProfile::uniform(0, TraitScale(10)), {{"compliance", 10}, {"self_discipline", 10}});
  const auto scores = parse_declared_scores(build_prompt(PromptKind::specific, facets, TraitScale(10)).text);
  ASSERT_TRUE(scores.fraction(Trait::agreeableness));
  EXPECT_EQ(*scores.fraction(Trait::agreeableness), Rational(1, 6));
  EXPECT_EQ(*scores.fraction(Trait::conscientiousness), Rational(1, 6));
  EXPECT_EQ(normalize_score_name("Positive emotions"), "positive_emotions");
}

TEST(PersonaLinear, DialogueUtterance) {
  ScriptedBackend b("persona-linear");
  ChatRequest r;
  r.tags.kind = RequestKind::dialogue;
  r.messages = {{Role::system, build_prompt(PromptKind::simple, BigFiveProfile({10, 20, 30, 40, 50}, TraitScale(100))).text},
                {Role::user, "Let's talk about music."},
                {Role::user, "Something"}};
  EXPECT_EQ(b.complete(r),
            "Turn 2: my openness is 10, conscientiousness is 20, extraversion is 30, agreeableness is 40, "
            "neuroticism is 50 out of 100.");
  r.messages.erase(r.messages.begin());
  EXPECT_EQ(b.complete(r), "Turn 2: I have no particular personality.");
}

TEST(Judges, AlwaysAndRandom) {
  ChatRequest r;
  r.messages = {{Role::user, "transcript"}};
  EXPECT_EQ(ScriptedBackend("judge-always:A").complete(r), "A");
  EXPECT_EQ(ScriptedBackend("judge-always:similar").complete(r), "similar");
  ScriptedBackend rnd("judge-random");
  EXPECT_EQ(rnd.complete(r), rnd.complete(r));
  std::map<std::string, int> seen;
  for (int i = 0; i < 300; ++i) {
    r.messages = {{Role::user, "transcript " + std::to_string(i)}};
    ++seen[rnd.complete(r)];
  }
  EXPECT_EQ(seen.size(), 3u);
  for (const auto& [label, n] : seen) EXPECT_GT(n, 60) << label;
}

TEST(Judges, Oracle) {
  ChatRequest r;
  r.tags.kind = RequestKind::judge;
  r.tags.trait = Trait::openness;
  r.messages = {{Role::user, "Agent A: Turn 1: my openness is 10, conscientiousness is 5 out of 100.\n"
                             "Agent B: Turn 2: my openness is 70.5, conscientiousness is 5 out of 100."}};
  EXPECT_EQ(ScriptedBackend("judge-oracle").complete(r), "B");
  r.tags.trait = Trait::conscientiousness;
  EXPECT_EQ(ScriptedBackend("judge-oracle").complete(r), "similar");
  EXPECT_EQ(ScriptedBackend("persona-linear").complete(r), "similar");
}

TEST(Behaviors, UnknownRejected) {
  EXPECT_THROW(ScriptedBackend("judge-always:C"), ConfigError);
  EXPECT_THROW(ScriptedBackend("psychic"), ConfigError);
  EXPECT_NO_THROW(ScriptedBackend("constant:hello"));
}
