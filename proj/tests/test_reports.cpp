#include <gtest/gtest.h>

#include <sstream>

#include "big5/eval.hpp"
#include "big5/reports.hpp"
#include "big5/scripted.hpp"

using namespace big5;

namespace {

const std::string kRoot = BIG5_SOURCE_DIR;

SweepReport linear_sweep() {
  Gateway gw(std::make_shared<ScriptedBackend>("persona-linear"));
  return trait_sweep(gw, load_questionnaire(kRoot + "/assets/questionnaires/toy_a.csv"), {}, 1);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(PlotSeries, FiveTraitsTenPoints) {
  std::ostringstream out;
  emit_plot_series(to_json(linear_sweep()), out);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0], "trait,level,score");
  EXPECT_EQ(rows[1], "openness,0,1.000000");
  EXPECT_EQ(rows[10], "openness,90,5.000000");
  EXPECT_EQ(rows[50], "neuroticism,90,5.000000");
}

TEST(PlotSeries, FlaggedTraitGetsNoteRow) {
  auto report = to_json(linear_sweep());
  report["traits"][2]["correlation"] = nullptr;
  report["traits"][2]["flags"] = {"level 40: no answered items"};
  std::ostringstream out;
  emit_plot_series(report, out);
  const auto rows = lines(out.str());
  EXPECT_EQ(rows.size(), 42u);
  EXPECT_NE(out.str().find("# extraversion omitted: level 40: no answered items"), std::string::npos);
}

TEST(PlotSeries, RejectsOtherReports) {
  std::ostringstream out;
  EXPECT_THROW(emit_plot_series(nlohmann::json{{"report_type", "grid"}}, out), InputError);
  EXPECT_THROW(emit_plot_series(nlohmann::json::object(), out), InputError);
}

TEST(SweepTables, Layout) {
  const auto report = linear_sweep();
  const auto corr = lines(sweep_correlation_table(report));
  ASSERT_EQ(corr.size(), 6u);
  EXPECT_EQ(corr[0], "model,prompt_kind,questionnaire,trait,r,p,n,flags");
  EXPECT_EQ(corr[1].rfind("scripted:persona-linear,simple,toy_a,openness,0.98473", 0), 0u) << corr[1];
  EXPECT_EQ(lines(sweep_scores_table(report)).size(), 51u);
  const auto j = to_json(report);
  EXPECT_EQ(j["report_type"], "sweep");
  EXPECT_EQ(j["traits"][0]["correlation"]["n"], 10);
}

TEST(JudgeReportJson, BaselineAndImprovement) {
  JudgeReport r;
  for (int i = 0; i < 3; ++i)
    r.entries.push_back({"d", Trait::openness, Verdict::a_higher, i == 0 ? Verdict::a_higher : Verdict::b_higher, i == 0, ""});
  const auto j = to_json(r, "judge");
  EXPECT_DOUBLE_EQ(j["score"].get<double>(), 100.0 / 3.0);
  EXPECT_NEAR(j["improvement"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(lines(judge_verdict_table(r)).size(), 4u);
}

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", ""};
  EXPECT_EQ(detail::split_record(detail::join_record(fields), ','), fields);
}

TEST(Numbers, Formatting) {
  EXPECT_EQ(format_number(4.0), "4.000000");
  EXPECT_EQ(format_number(4.0, 2), "4.00");
  EXPECT_EQ(format_number(0.1234567), "0.123457");
  EXPECT_TRUE(json_number(std::nan("")).is_null());
}

TEST(Format, PValueKeepsSmallValues) {
  EXPECT_EQ(big5::format_p_value(2.33419e-07), "2.33419e-07");
  EXPECT_EQ(big5::format_p_value(0), "0");
  EXPECT_EQ(big5::format_p_value(0.104088), "0.104088");
}
