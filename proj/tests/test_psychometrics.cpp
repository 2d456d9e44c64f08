#include <gtest/gtest.h>

#include <sstream>

#include "big5/psychometrics.hpp"
#include "big5/scripted.hpp"

using namespace big5;

namespace {

const std::string kRoot = BIG5_SOURCE_DIR;

Questionnaire parse(const std::string& text) {
  std::istringstream in(text);
  return read_questionnaire(in, "inline");
}

ResponseSet responses(const Questionnaire& q, std::vector<std::optional<int>> ratings) {
  ResponseSet rs;
  for (std::size_t i = 0; i < q.items.size(); ++i) rs.items.push_back({q.items[i].id, "", ratings[i], 1, ""});
  return rs;
}

Gateway scripted(const std::string& behavior, int parallelism = 4) {
  return Gateway(std::make_shared<ScriptedBackend>(behavior), {}, parallelism);
}

}  // namespace

TEST(Loader, ToyFourItems) {
  const auto q = load_questionnaire(kRoot + "/assets/questionnaires/toy4.csv");
  EXPECT_EQ(q.items.size(), 4u);
  EXPECT_EQ(q.name, "toy4");
  EXPECT_EQ(q.count(Trait::neuroticism), 0u);
  EXPECT_FALSE(q.covers_all_traits());
  EXPECT_TRUE(q.items[2].reverse_keyed);
}

TEST(Loader, ShippedBanks) {
  const auto ipip = load_questionnaire(kRoot + "/assets/questionnaires/ipip50.csv");
  EXPECT_EQ(ipip.items.size(), 50u);
  for (Trait t : kTraits) EXPECT_EQ(ipip.count(t), 10u);
  const auto b = load_questionnaire(kRoot + "/assets/questionnaires/toy_b.tsv");
  EXPECT_EQ(b.items.size(), 15u);
  EXPECT_EQ(b.items[0].facet, Facet::fantasy);
  const auto c = load_questionnaire(kRoot + "/assets/questionnaires/toy_c.csv");
  EXPECT_EQ(c.likert_max, 7);
}

TEST(Loader, FacetMustBelongToTrait) {
  try {
    parse("id,text,trait,facet,reverse\nx1,I dream.,conscientiousness,fantasy,0\n");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("inline:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("fantasy"), std::string::npos);
  }
}

TEST(Loader, Errors) {
  EXPECT_THROW(parse("id,text,trait,reverse\nx1,A.,charm,0\n"), LoadError);
  EXPECT_THROW(parse("id,text,trait,reverse\nx1,A.,openness,0\nx1,B.,openness,0\n"), LoadError);
  EXPECT_THROW(parse("id,text,reverse\nx1,A.,0\n"), LoadError);
  EXPECT_THROW(parse("id,text,trait,reverse\nx1,A.,openness,2\n"), LoadError);
  EXPECT_THROW(parse("id,text,trait,reverse\n"), LoadError);
  EXPECT_THROW(parse("# likert: 5-1\nid,text,trait,reverse\nx1,A.,openness,0\n"), LoadError);
  EXPECT_THROW(load_questionnaire(kRoot + "/assets/questionnaires/missing.csv"), LoadError);
}

TEST(Loader, QuotedFieldsAndSevenPoint) {
  const auto q = parse("# likert: 1-7\nid,text,trait,reverse\nq1,\"I like order, mostly.\",conscientiousness,0\n");
  EXPECT_EQ(q.items[0].text, "I like order, mostly.");
  EXPECT_EQ(q.likert_max, 7);
  const auto rep = score(responses(q, {7}), q);
  EXPECT_DOUBLE_EQ(rep.at(Trait::conscientiousness).mean, 7.0);
  EXPECT_THROW(score(responses(q, {8}), q), RangeError);
}

TEST(ParseLikert, Examples) {
  EXPECT_EQ(parse_likert("3", 1, 5), 3);
  EXPECT_EQ(parse_likert("I choose option 4 because it fits.", 1, 5), 4);
  EXPECT_EQ(parse_likert("(2)\nBecause 5 reasons", 1, 5), 2);
  EXPECT_EQ(parse_likert("\n\n  5 - Very accurate", 1, 5), 5);
  EXPECT_EQ(parse_likert("4, definitely 4", 1, 5), 4);
  EXPECT_THROW(parse_likert("2 or maybe 4", 1, 5), ParseError);
  EXPECT_THROW(parse_likert("none of them", 1, 5), ParseError);
  EXPECT_THROW(parse_likert("6", 1, 5), ParseError);
  EXPECT_EQ(parse_likert("6", 1, 7), 6);
}

TEST(Render, ItemPromptShape) {
  const Item item{"i1", "Am the life of the party.", Trait::extraversion, std::nullopt, false};
  const auto text = render_likert_item(item, 1, 5);
  EXPECT_NE(text.find("\"Am the life of the party.\""), std::string::npos);
  EXPECT_NE(text.find("5 = Very accurate"), std::string::npos);
  const auto seven = likert_options(1, 7);
  EXPECT_NE(seven.find("4 = Neither accurate nor inaccurate"), std::string::npos);
  EXPECT_NE(seven.find("7 = Very accurate"), std::string::npos);
}

TEST(Score, ToyExamples) {
  const auto q = parse("id,text,trait,reverse\ne1,A.,extraversion,0\ne2,B.,extraversion,0\na1,C.,agreeableness,1\n");
  const auto rep = score(responses(q, {5, 3, 2}), q);
  EXPECT_DOUBLE_EQ(rep.at(Trait::extraversion).mean, 4.0);
  EXPECT_DOUBLE_EQ(rep.at(Trait::extraversion).variance, 1.0);
  EXPECT_DOUBLE_EQ(rep.at(Trait::agreeableness).mean, 4.0);  // 6 - 2
  EXPECT_FALSE(rep.has(Trait::openness));
  EXPECT_TRUE(rep.flagged.empty());
  EXPECT_DOUBLE_EQ(score(responses(q, {5, 3, 2}), q, VarianceKind::sample).at(Trait::extraversion).variance, 2.0);
}

TEST(Score, AllMaxAndMissing) {
  const auto q = load_questionnaire(kRoot + "/assets/questionnaires/toy_a.csv");
  std::vector<std::optional<int>> ratings;
  for (const auto& item : q.items) ratings.push_back(item.reverse_keyed ? 1 : 5);
  auto rep = score(responses(q, ratings), q);
  for (Trait t : kTraits) {
    EXPECT_DOUBLE_EQ(rep.at(t).mean, 5.0);
    EXPECT_DOUBLE_EQ(rep.at(t).variance, 0.0);
  }
  ratings[8] = ratings[9] = std::nullopt;  // both neuroticism items
  rep = score(responses(q, ratings), q);
  EXPECT_FALSE(rep.has(Trait::neuroticism));
  ASSERT_EQ(rep.flagged.size(), 1u);
  EXPECT_EQ(rep.flagged[0], Trait::neuroticism);
}

TEST(Administer, PersonaLinearExtraversion) {
  const auto q = parse("id,text,trait,reverse\ne1,A.,extraversion,0\ne2,B.,extraversion,1\n");
  auto gw = scripted("persona-linear");
  const auto persona = build_prompt(PromptKind::simple, BigFiveProfile({0, 0, 80, 0, 0}, TraitScale(100)));
  const auto rs = administer(persona, q, gw);
  EXPECT_EQ(rs.items[0].rating, 5);
  EXPECT_EQ(rs.items[1].rating, 1);
  EXPECT_DOUBLE_EQ(score(rs, q).at(Trait::extraversion).mean, 5.0);
}

TEST(Administer, EchoBackendExhaustsRetries) {
  const auto q = parse("id,text,trait,reverse\ne1,A.,extraversion,0\n");
  auto gw = scripted("echo-last");
  AdministerOptions opts;
  opts.parse_retries = 2;
  const auto rs = administer(build_neutral_prompt(), q, gw, opts);
  EXPECT_FALSE(rs.items[0].rating);
  EXPECT_EQ(rs.items[0].attempts, 3);
  EXPECT_FALSE(rs.items[0].note.empty());
  EXPECT_TRUE(rs.unreliable);
  EXPECT_EQ(gw.request_attempts(), 3u);
}

TEST(Administer, OrderIndependentOfShuffleAndParallelism) {
  const auto q = load_questionnaire(kRoot + "/assets/questionnaires/ipip50.csv");
  const auto persona = build_prompt(PromptKind::simspec, random_profile(3, TraitScale(100)));
  auto serial = scripted("persona-linear", 1);
  auto wide = scripted("persona-linear", 16);
  AdministerOptions shuffled;
  shuffled.shuffle = true;
  shuffled.seed = 99;
  const auto a = administer(persona, q, serial);
  const auto b = administer(persona, q, wide, shuffled);
  ASSERT_EQ(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    EXPECT_EQ(a.items[i].item_id, q.items[i].id);
    EXPECT_EQ(a.items[i].item_id, b.items[i].item_id);
    EXPECT_EQ(a.items[i].rating, b.items[i].rating);
  }
}

TEST(Administer, NeutralGivesMidpoint) {
  const auto q = load_questionnaire(kRoot + "/assets/questionnaires/ipip50.csv");
  auto gw = scripted("persona-linear");
  const auto rep = score(administer(build_neutral_prompt(), q, gw), q);
  for (Trait t : kTraits) EXPECT_DOUBLE_EQ(rep.at(t).mean, 3.0);
}
