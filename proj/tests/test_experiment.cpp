#include <gtest/gtest.h>

#include <fstream>

#include "big5/experiment.hpp"
#include "oracles.hpp"

using namespace big5;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = BIG5_SOURCE_DIR;

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::path(BIG5_TEST_TMP) / "experiment" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json base(const std::string& experiment) {
  return {{"experiment", experiment},
          {"seed", 3},
          {"backend", {{"id", "linear"}, {"kind", "scripted"}, {"behavior", "persona-linear"}}},
          {"questionnaire", (kRoot / "assets/questionnaires/toy_a.csv").string()}};
}

RunManifest run(const nlohmann::json& j, const fs::path& out) {
  return run_experiment(parse_experiment_config(j, kRoot), out);
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::vector<std::string> violations(const nlohmann::json& j, std::optional<ExperimentKind> kind = std::nullopt) {
  try {
    parse_experiment_config(j, kRoot, kind);
  } catch (const ConfigValidationError& e) {
    return e.violations;
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, ValidSweep) {
  const auto cfg = parse_experiment_config(base("sweep"), kRoot);
  EXPECT_EQ(cfg.kind, ExperimentKind::sweep);
  EXPECT_EQ(cfg.seed, 3u);
  ASSERT_EQ(cfg.prompt_kinds.size(), 1u);
  EXPECT_EQ(cfg.scales.front().n(), 100);
}

TEST(Config, ListsEveryViolation) {
  auto j = base("sweep");
  j.erase("seed");
  j["questionnaire"] = "nowhere/missing.csv";
  j["turns"] = 5;
  j["params"] = {{"top_p", 2.0}};
  j["backend"]["behavior"] = "psychic";
  const auto v = violations(j);
  EXPECT_GE(v.size(), 5u);
  EXPECT_TRUE(mentions(v, "seed"));
  EXPECT_TRUE(mentions(v, "missing.csv"));
  EXPECT_TRUE(mentions(v, "turns"));
  EXPECT_TRUE(mentions(v, "top_p"));
  EXPECT_TRUE(mentions(v, "psychic"));
}

TEST(Config, HttpBackendNeedsCredentials) {
  auto j = base("sweep");
  j["backend"] = {{"kind", "http_chat"}, {"endpoint", "api.example.com"}, {"credential_env", "BIG5_NOT_SET_ANYWHERE"}};
  unsetenv("BIG5_NOT_SET_ANYWHERE");
  const auto v = violations(j);
  EXPECT_TRUE(mentions(v, "scheme"));
  EXPECT_TRUE(mentions(v, "model"));
  EXPECT_TRUE(mentions(v, "BIG5_NOT_SET_ANYWHERE"));
}

TEST(Config, ExperimentSpecificRules) {
  auto judge = base("judge");
  EXPECT_TRUE(mentions(violations(judge), "judge_backend"));
  auto imitate = base("imitate");
  EXPECT_TRUE(mentions(violations(imitate), "human_scores"));
  auto score = base("score");
  EXPECT_TRUE(mentions(violations(score), "profiles"));
  auto sweep = base("sweep");
  sweep["prompt_kinds"] = {"naive"};
  EXPECT_TRUE(mentions(violations(sweep), "naive"));
  auto multi = base("sweep");
  multi["backends"] = {multi["backend"]};
  EXPECT_TRUE(mentions(violations(multi), "several backends"));
  EXPECT_TRUE(mentions(violations(base("sweep"), ExperimentKind::grid), "was requested"));
  EXPECT_TRUE(violations(base("grid"), ExperimentKind::grid).empty());
}

TEST(Config, ShippedConfigsValidate) {
  for (const auto& entry : fs::directory_iterator(kRoot / "configs")) {
    if (entry.path().filename() == "sweep_live.json") continue;
    EXPECT_NO_THROW(load_experiment_config(entry.path())) << entry.path();
  }
}

TEST(Config, MissingFileNothingExecuted) {
  const auto out = fresh_dir("missing");
  auto j = base("sweep");
  j["questionnaire"] = "gone.csv";
  EXPECT_THROW(run(j, out), ConfigValidationError);
  EXPECT_TRUE(fs::is_empty(out));
}

TEST(Run, SweepManifest) {
  const auto out = fresh_dir("sweep");
  const auto m = run(base("sweep"), out);
  EXPECT_TRUE(m.ok());
  EXPECT_TRUE(fs::exists(m.run_dir / "manifest.json"));
  const auto manifest = read_json(m.run_dir / "manifest.json");
  EXPECT_EQ(manifest["tool_version"], "0.1.0");
  EXPECT_EQ(manifest["config"]["seed"], 3);
  const auto files = manifest["files"].get<std::vector<std::string>>();
  EXPECT_TRUE(std::count(files.begin(), files.end(), "sweep_simple_toy_a.json"));
  EXPECT_TRUE(std::count(files.begin(), files.end(), "requests_linear.jsonl"));
  for (const auto& f : files) EXPECT_TRUE(fs::exists(m.run_dir / f)) << f;
  EXPECT_EQ(manifest["request_counts"]["linear"], 500);  // 5 traits x 10 levels x 10 items
  for (const auto& e : fs::recursive_directory_iterator(m.run_dir)) EXPECT_NE(e.path().extension(), ".tmp");

  ScriptedBackend replay("persona-linear");
  const auto r = replay_request_log(m.run_dir / "requests_linear.jsonl", replay);
  EXPECT_EQ(r.records, 500u);
  EXPECT_EQ(r.mismatches, 0u);
}

TEST(Run, SameSeedSameReports) {
  const auto out = fresh_dir("determinism");
  auto j = base("sweep");
  j["shuffle_items"] = true;
  const auto a = run(j, out);
  const auto b = run(j, out);
  ASSERT_NE(a.run_dir, b.run_dir);
  for (const auto& f : {"sweep_simple_toy_a.json", "sweep_simple_toy_a_correlation.csv", "sweep_simple_toy_a_scores.csv"})
    EXPECT_EQ(oracle::read_file((a.run_dir / f).string()), oracle::read_file((b.run_dir / f).string())) << f;
}

TEST(Run, TaskFailureRecorded) {
  const auto out = fresh_dir("failure");
  auto j = base("sweep");
  j["backend"]["behavior"] = "constant:3";
  const auto m = run(j, out);
  EXPECT_FALSE(m.ok());
  ASSERT_EQ(m.tasks.size(), 1u);
  EXPECT_NE(m.tasks[0].error.find("zero variance"), std::string::npos);
  EXPECT_EQ(read_json(m.run_dir / "manifest.json")["tasks"][0]["status"], "failed");
  EXPECT_TRUE(fs::exists(m.run_dir / "sweep_simple_toy_a.json"));
}

TEST(Run, InduceAndScore) {
  const auto out = fresh_dir("induce");
  auto m = run(base("induce"), out);
  ASSERT_TRUE(m.ok());
  const auto table = read_json(m.run_dir / "induce_toy_a.json");
  EXPECT_EQ(table["rows"].size(), 5u);
  EXPECT_DOUBLE_EQ(table["rows"][2]["traits"]["openness"]["mean"].get<double>(), 5.0);

  auto s = base("score");
  s["profiles"] = {{{"openness", 100}, {"conscientiousness", 0}, {"extraversion", 50}, {"agreeableness", 50},
                    {"neuroticism", 50}, {"fantasy", 0}}};
  s["prompt_kind"] = "specific";
  m = run(s, out);
  ASSERT_TRUE(m.ok()) << m.tasks[0].error;
  const auto report = read_json(m.run_dir / "score.json");
  // five openness facets at 100 and fantasy at 0 average 83.3 -> 1 + floor(4.17) = 5
  EXPECT_DOUBLE_EQ(report["results"][0]["report"]["traits"]["openness"]["mean"].get<double>(), 5.0);
  EXPECT_DOUBLE_EQ(report["results"][0]["report"]["traits"]["conscientiousness"]["mean"].get<double>(), 1.0);
}

TEST(Run, DialogueThenConsistencyAndJudgeFromFiles) {
  const auto out = fresh_dir("dialogue");
  auto d = base("dialogue");
  d["dialogues"] = 4;
  const auto m = run(d, out);
  ASSERT_TRUE(m.ok());
  std::vector<std::string> transcripts;
  for (const auto& f : m.files)
    if (f.rfind("transcripts/", 0) == 0) transcripts.push_back((m.run_dir / f).string());
  ASSERT_EQ(transcripts.size(), 4u);

  auto c = base("consistency");
  c.erase("backend");
  c["transcripts"] = transcripts;
  c["scorer"] = {{"command", {"python3", (kRoot / "tests/fixtures/jaccard_scorer.py").string()}}, {"name", "jaccard"}};
  const auto cm = run(c, out);
  ASSERT_TRUE(cm.ok()) << cm.tasks.back().error;
  const auto summary = read_json(cm.run_dir / "consistency.json");
  EXPECT_EQ(summary["scorer"], "jaccard");
  EXPECT_EQ(summary["agents"], 8);

  auto j = base("judge");
  j.erase("backend");
  j["transcripts"] = transcripts;
  j["judge_backend"] = {{"id", "oracle"}, {"kind", "scripted"}, {"behavior", "judge-oracle"}};
  const auto jm = run(j, out);
  ASSERT_TRUE(jm.ok());
  const auto verdicts = read_json(jm.run_dir / "judge.json");
  EXPECT_EQ(verdicts["verdicts"], 20);
  EXPECT_DOUBLE_EQ(verdicts["score"].get<double>(), 100.0);
}

TEST(Run, PartialDialogueSaved) {
  const auto out = fresh_dir("partial");
  auto d = base("dialogue");
  d["backend"]["behavior"] = "constant: ";
  d["dialogues"] = 1;
  const auto m = run(d, out);
  EXPECT_FALSE(m.ok());
  const auto t = load_transcript(m.run_dir / "transcripts/dialogue_0001.jsonl");
  EXPECT_TRUE(t.failure);
}

TEST(Run, ImitateAndGrid) {
  const auto out = fresh_dir("imitate");
  auto i = base("imitate");
  i["human_scores"] = (kRoot / "tests/fixtures/human_scores.csv").string();
  auto m = run(i, out);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(read_json(m.run_dir / "imitate.json")["mean_rmse"].get<double>(), 0.0);

  auto g = base("grid");
  g["agents_per_cell"] = 2;
  g["scales"] = {10, 100};
  m = run(g, out);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(read_json(m.run_dir / "grid.json")["cells"].size(), 6u);
}

TEST(Run, TemplatesDirectoryAndVariant) {
  const auto out = fresh_dir("templates");
  auto j = base("sweep");
  j["templates"] = (kRoot / "assets/templates").string();
  j["template_variant"] = "corrected";
  j["prompt_kinds"] = {"specific"};
  const auto m = run(j, out);
  EXPECT_TRUE(m.ok());
  const auto log = oracle::read_file((m.run_dir / "requests_linear.jsonl").string());
  EXPECT_EQ(log.find("compilance"), std::string::npos);
  EXPECT_NE(log.find("Your compliance score"), std::string::npos);
}
