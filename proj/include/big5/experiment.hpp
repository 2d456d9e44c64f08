#pragma once

// Config-driven experiment runs. One experiment per JSON file; every run
// writes to <output_dir>/<experiment>/<timestamp>/ and finishes with
// manifest.json.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "big5/detail/parallel.hpp"
#include "big5/detail/random.hpp"
#include "big5/detail/time.hpp"
#include "big5/dialogue.hpp"
#include "big5/eval.hpp"
#include "big5/http_backend.hpp"
#include "big5/psychometrics.hpp"
#include "big5/reports.hpp"
#include "big5/scorer.hpp"

namespace big5 {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExperimentKind { induce, sweep, dialogue, consistency, judge, imitate, grid, score };

inline constexpr std::array<std::string_view, 8> kExperimentNames = {"induce", "sweep",   "dialogue", "consistency",
                                                                     "judge",  "imitate", "grid",     "score"};

inline std::string_view experiment_name(ExperimentKind k) { return kExperimentNames[static_cast<std::size_t>(k)]; }

inline std::optional<ExperimentKind> find_experiment(std::string_view name) {
  for (std::size_t i = 0; i < kExperimentNames.size(); ++i)
    if (kExperimentNames[i] == name) return static_cast<ExperimentKind>(i);
  return std::nullopt;
}

struct ScorerSpec {
  std::string name = "tf_cosine";
  std::vector<std::string> command;  // empty: built-in tf_cosine
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sweep;
  nlohmann::json snapshot;
  std::filesystem::path base_dir;  // config file directory; relative paths resolve here
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::vector<BackendSpec> backends;
  std::optional<BackendSpec> judge_backend;
  GenerationParams params;
  std::vector<PromptKind> prompt_kinds;
  std::vector<TraitScale> scales;
  std::vector<std::filesystem::path> questionnaires;
  std::vector<std::string> topics = default_topics();
  int dialogues = 1;
  int turns = 20;
  std::vector<std::filesystem::path> transcripts;
  ScorerSpec scorer;
  std::optional<std::filesystem::path> human_scores;
  int agents_per_cell = 50;
  std::vector<nlohmann::json> profiles;
  double missing_threshold = 0.10;
  double unreliable_cell_threshold = 0.10;
  int judge_tau = 0;
  int parse_retries = 2;
  bool shuffle_items = false;
  bool trace = true;
  VarianceKind variance = VarianceKind::population;
  std::optional<std::filesystem::path> templates_dir;
  TemplateVariant template_variant = TemplateVariant::original;
};

namespace detail {

class Violations {
 public:
  void add(std::string msg) { list_.push_back(std::move(msg)); }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() const { throw ConfigValidationError(list_); }

 private:
  std::vector<std::string> list_;
};

inline BackendSpec parse_backend(const nlohmann::json& j, const std::string& where, Violations& v) {
  BackendSpec spec;
  if (!j.is_object()) {
    v.add(where + " must be an object");
    return spec;
  }
  const auto kind = j.value("kind", std::string());
  if (kind == "scripted") {
    spec.kind = BackendKind::scripted;
    spec.behavior = j.value("behavior", std::string());
    if (spec.behavior.empty()) {
      v.add(where + ": scripted backend needs a behavior profile");
    } else {
      try {
        ScriptedBackend probe(spec.behavior);
      } catch (const Error& e) {
        v.add(where + ": " + e.what());
      }
    }
  } else if (kind == "http_chat") {
    spec.kind = BackendKind::http_chat;
    spec.endpoint = j.value("endpoint", std::string());
    spec.model = j.value("model", std::string());
    spec.credential_env = j.value("credential_env", std::string());
    if (spec.endpoint.empty()) v.add(where + ": http_chat backend needs an endpoint");
    else if (spec.endpoint.find("://") == std::string::npos) v.add(where + ": endpoint must include a scheme");
    if (spec.model.empty()) v.add(where + ": http_chat backend needs a model identifier");
    if (spec.credential_env.empty()) {
      v.add(where + ": http_chat backend needs credential_env");
    } else if (const char* val = std::getenv(spec.credential_env.c_str()); !val || !*val) {
      v.add(where + ": credential environment variable " + spec.credential_env + " is not set");
    }
  } else {
    v.add(where + ": kind must be 'scripted' or 'http_chat'");
  }
  spec.id = j.value("id", spec.kind == BackendKind::scripted ? spec.behavior : spec.model);
  if (j.contains("retry")) {
    spec.retry.max_attempts = j["retry"].value("max_attempts", spec.retry.max_attempts);
    spec.retry.backoff_base = std::chrono::milliseconds(j["retry"].value("backoff_base_ms", 500));
    if (spec.retry.max_attempts < 1) v.add(where + ": retry.max_attempts must be >= 1");
  }
  spec.parallelism = j.value("parallelism", spec.parallelism);
  if (spec.parallelism < 1) v.add(where + ": parallelism must be >= 1");
  spec.timeout = std::chrono::seconds(j.value("timeout_s", 60));
  return spec;
}

}  // namespace detail

// Parses and validates; every problem is reported at once.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                                                std::optional<ExperimentKind> expected = std::nullopt) {
  detail::Violations v;
  ExperimentConfig cfg;
  cfg.snapshot = j;
  cfg.base_dir = base_dir;
  if (!j.is_object()) {
    v.add("configuration must be a JSON object");
    v.raise();
  }
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  auto require_file = [&](const std::filesystem::path& p, const std::string& what) {
    if (!std::filesystem::is_regular_file(p)) v.add(what + " not found: " + p.string());
  };

  if (j.contains("experiment")) {
    const auto name = j["experiment"].get<std::string>();
    if (auto k = find_experiment(name)) cfg.kind = *k;
    else v.add("unknown experiment '" + name + "'");
    if (expected && find_experiment(name) && *find_experiment(name) != *expected)
      v.add("config declares experiment '" + name + "' but '" + std::string(experiment_name(*expected)) +
            "' was requested");
  } else if (expected) {
    cfg.kind = *expected;
  } else {
    v.add("missing 'experiment'");
  }

  if (!j.contains("seed") || !j["seed"].is_number_integer()) v.add("missing integer 'seed' (seeds are never implicit)");
  else cfg.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("output_dir")) cfg.output_dir = resolve(j["output_dir"].get<std::string>());

  if (j.contains("params")) {
    cfg.params = params_from_json(j["params"]);
    try {
      cfg.params.validate();
    } catch (const ConfigError& e) {
      v.add(std::string("params: ") + e.what());
    }
  }

  if (j.contains("backend")) cfg.backends.push_back(detail::parse_backend(j["backend"], "backend", v));
  if (j.contains("backends")) {
    std::size_t i = 0;
    for (const auto& b : j["backends"]) cfg.backends.push_back(detail::parse_backend(b, "backends[" + std::to_string(i++) + "]", v));
  }
  if (j.contains("judge_backend")) cfg.judge_backend = detail::parse_backend(j["judge_backend"], "judge_backend", v);

  auto kinds_from = [&](const nlohmann::json& arr) {
    for (const auto& k : arr) {
      try {
        cfg.prompt_kinds.push_back(parse_prompt_kind(k.get<std::string>()));
      } catch (const Error& e) {
        v.add(e.what());
      }
    }
  };
  if (j.contains("prompt_kind")) kinds_from(nlohmann::json::array({j["prompt_kind"]}));
  if (j.contains("prompt_kinds")) kinds_from(j["prompt_kinds"]);

  auto scales_from = [&](const nlohmann::json& arr) {
    for (const auto& s : arr) {
      if (!s.is_number_integer() || s.get<int>() < 1) v.add("scale must be a positive integer");
      else cfg.scales.emplace_back(s.get<int>());
    }
  };
  if (j.contains("scale")) scales_from(nlohmann::json::array({j["scale"]}));
  if (j.contains("scales")) scales_from(j["scales"]);

  auto qs_from = [&](const nlohmann::json& arr) {
    for (const auto& q : arr) {
      cfg.questionnaires.push_back(resolve(q.get<std::string>()));
      require_file(cfg.questionnaires.back(), "questionnaire");
    }
  };
  if (j.contains("questionnaire")) qs_from(nlohmann::json::array({j["questionnaire"]}));
  if (j.contains("questionnaires")) qs_from(j["questionnaires"]);

  if (j.contains("topics")) {
    cfg.topics = j["topics"].get<std::vector<std::string>>();
    if (cfg.topics.empty()) v.add("topics must not be empty");
  }
  cfg.dialogues = j.value("dialogues", cfg.dialogues);
  cfg.turns = j.value("turns", cfg.turns);
  if (cfg.turns < 2 || cfg.turns % 2) v.add("turns must be even and >= 2");
  if (cfg.dialogues < 1) v.add("dialogues must be >= 1");
  if (j.contains("transcripts"))
    for (const auto& t : j["transcripts"]) {
      cfg.transcripts.push_back(resolve(t.get<std::string>()));
      require_file(cfg.transcripts.back(), "transcript");
    }
  if (j.contains("scorer")) {
    const auto& s = j["scorer"];
    if (s.is_string()) {
      if (s.get<std::string>() != "tf_cosine") v.add("unknown scorer '" + s.get<std::string>() + "'");
    } else if (s.is_object() && s.contains("command")) {
      cfg.scorer.command = s["command"].get<std::vector<std::string>>();
      cfg.scorer.name = s.value("name", std::string("external"));
      if (cfg.scorer.command.empty()) v.add("scorer.command must not be empty");
    } else {
      v.add("scorer must be \"tf_cosine\" or {\"command\": [...]} ");
    }
  }
  if (j.contains("human_scores")) {
    cfg.human_scores = resolve(j["human_scores"].get<std::string>());
    require_file(*cfg.human_scores, "human scores file");
  }
  cfg.agents_per_cell = j.value("agents_per_cell", cfg.agents_per_cell);
  if (cfg.agents_per_cell < 1) v.add("agents_per_cell must be >= 1");
  if (j.contains("profiles")) cfg.profiles = j["profiles"].get<std::vector<nlohmann::json>>();
  if (j.contains("thresholds")) {
    const auto& t = j["thresholds"];
    cfg.missing_threshold = t.value("missing", cfg.missing_threshold);
    cfg.unreliable_cell_threshold = t.value("unreliable_cell", cfg.unreliable_cell_threshold);
    cfg.judge_tau = t.value("judge_tau", cfg.judge_tau);
    if (cfg.missing_threshold < 0 || cfg.missing_threshold > 1) v.add("thresholds.missing must lie in [0, 1]");
    if (cfg.judge_tau < 0) v.add("thresholds.judge_tau must be >= 0");
  }
  cfg.parse_retries = j.value("parse_retries", cfg.parse_retries);
  if (cfg.parse_retries < 0) v.add("parse_retries must be >= 0");
  cfg.shuffle_items = j.value("shuffle_items", cfg.shuffle_items);
  cfg.trace = j.value("trace", cfg.trace);
  if (j.contains("variance")) {
    const auto s = j["variance"].get<std::string>();
    if (s == "population") cfg.variance = VarianceKind::population;
    else if (s == "sample") cfg.variance = VarianceKind::sample;
    else v.add("variance must be 'population' or 'sample'");
  }
  if (j.contains("templates")) {
    cfg.templates_dir = resolve(j["templates"].get<std::string>());
    if (!std::filesystem::is_directory(*cfg.templates_dir)) v.add("templates directory not found: " + cfg.templates_dir->string());
  }
  if (j.contains("template_variant")) {
    const auto s = j["template_variant"].get<std::string>();
    if (s == "original") cfg.template_variant = TemplateVariant::original;
    else if (s == "corrected") cfg.template_variant = TemplateVariant::corrected;
    else v.add("template_variant must be 'original' or 'corrected'");
  }

  // Per-experiment requirements.
  const auto k = cfg.kind;
  const bool uses_transcripts = k == ExperimentKind::consistency || k == ExperimentKind::judge;
  if (!uses_transcripts && cfg.backends.empty()) v.add("missing 'backend'");
  if (uses_transcripts && cfg.transcripts.empty() && cfg.backends.empty())
    v.add("provide 'transcripts' or a 'backend' to generate dialogues");
  if (k != ExperimentKind::grid && cfg.backends.size() > 1) v.add("only grid experiments accept several backends");
  if (k == ExperimentKind::judge && !cfg.judge_backend) v.add("missing 'judge_backend'");
  const bool needs_questionnaire = k == ExperimentKind::induce || k == ExperimentKind::sweep ||
                                   k == ExperimentKind::imitate || k == ExperimentKind::grid ||
                                   k == ExperimentKind::score;
  if (needs_questionnaire && cfg.questionnaires.empty()) v.add("missing 'questionnaire'");
  if (k == ExperimentKind::imitate && !cfg.human_scores) v.add("missing 'human_scores'");
  if (k == ExperimentKind::score && cfg.profiles.empty()) v.add("missing 'profiles'");
  for (auto pk : cfg.prompt_kinds) {
    if (pk == PromptKind::naive && k != ExperimentKind::induce)
      v.add("prompt kind 'naive' is only valid for induce experiments");
    else if (pk == PromptKind::neutral && (k == ExperimentKind::sweep || k == ExperimentKind::grid))
      v.add(std::string(experiment_name(k)) + " prompt kinds must be simple, specific or simspec");
  }
  if (k == ExperimentKind::score && !cfg.scales.empty()) {
    for (std::size_t i = 0; i < cfg.profiles.size(); ++i) {
      try {
        profile_from_json(cfg.profiles[i], cfg.scales.front());
      } catch (const Error& e) {
        v.add("profiles[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (!v.empty()) v.raise();

  // Defaults that depend on the experiment.
  if (cfg.prompt_kinds.empty()) {
    if (k == ExperimentKind::induce)
      cfg.prompt_kinds = {PromptKind::neutral, PromptKind::naive, PromptKind::simple, PromptKind::specific,
                          PromptKind::simspec};
    else if (k == ExperimentKind::grid)
      cfg.prompt_kinds = {PromptKind::simple, PromptKind::specific, PromptKind::simspec};
    else
      cfg.prompt_kinds = {PromptKind::simple};
  }
  if (cfg.scales.empty()) {
    if (k == ExperimentKind::grid) cfg.scales = {TraitScale(10), TraitScale(25), TraitScale(50), TraitScale(100)};
    else cfg.scales = {TraitScale(100)};
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                               std::optional<ExperimentKind> expected = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigValidationError({"config file not found: " + path.string()});
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigValidationError({path.string() + ": " + e.what()});
  }
  return parse_experiment_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
                                 expected);
}

// ---- run bookkeeping ----

struct TaskStatus {
  std::string name;
  bool ok = true;
  std::string error;
};

struct RunManifest {
  nlohmann::json config;
  std::string tool_version{kToolVersion};
  std::string experiment;
  std::filesystem::path run_dir;
  std::string started_at;
  std::string finished_at;
  std::vector<TaskStatus> tasks;
  std::vector<std::string> files;  // relative to run_dir
  std::map<std::string, std::uint64_t> request_counts;

  bool ok() const {
    return std::all_of(tasks.begin(), tasks.end(), [](const auto& t) { return t.ok; });
  }
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : m.tasks) {
    nlohmann::json j = {{"name", t.name}, {"status", t.ok ? "ok" : "failed"}};
    if (!t.ok) j["error"] = t.error;
    tasks.push_back(std::move(j));
  }
  return {{"tool_version", m.tool_version}, {"experiment", m.experiment},   {"config", m.config},
          {"started_at", m.started_at},     {"finished_at", m.finished_at}, {"tasks", tasks},
          {"files", m.files},               {"request_counts", m.request_counts}};
}

// temp file + rename, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class RunContext {
 public:
  RunContext(const ExperimentConfig& cfg, std::filesystem::path run_dir) : cfg_(cfg) {
    manifest_.config = cfg.snapshot;
    manifest_.experiment = std::string(experiment_name(cfg.kind));
    manifest_.run_dir = std::move(run_dir);
    manifest_.started_at = detail::utc_timestamp();
    std::filesystem::create_directories(manifest_.run_dir);
    if (cfg.templates_dir) templates_ = TemplateSet::from_directory(*cfg.templates_dir, cfg.template_variant);
    else templates_ = TemplateSet::builtin(cfg.template_variant);
  }

  const ExperimentConfig& config() const { return cfg_; }
  const TemplateSet& templates() const { return *templates_; }
  RunManifest& manifest() { return manifest_; }
  const std::filesystem::path& dir() const { return manifest_.run_dir; }

  void write(const std::string& relative, const std::string& content) {
    write_file_atomic(dir() / relative, content);
    std::lock_guard lock(mutex_);
    add_file(relative);
  }

  Gateway& gateway(const BackendSpec& spec) {
    std::lock_guard lock(mutex_);
    const std::string key = spec.id.empty() ? "backend" : spec.id;
    auto it = gateways_.find(key);
    if (it != gateways_.end()) return *it->second;
    auto gw = make_gateway(spec);
    if (cfg_.trace) {
      const std::string rel = "requests_" + sanitize(key) + ".jsonl";
      gw->set_request_log(std::make_shared<RequestLog>(dir() / rel));
      add_file(rel);
    }
    return *gateways_.emplace(key, std::move(gw)).first->second;
  }

  AdministerOptions admin_options() const {
    AdministerOptions a;
    a.params = cfg_.params;
    a.parse_retries = cfg_.parse_retries;
    a.seed = cfg_.seed;
    a.shuffle = cfg_.shuffle_items;
    a.missing_threshold = cfg_.missing_threshold;
    return a;
  }

  const Questionnaire& questionnaire(const std::filesystem::path& path) {
    std::lock_guard lock(mutex_);
    auto it = questionnaires_.find(path.string());
    if (it == questionnaires_.end()) it = questionnaires_.emplace(path.string(), load_questionnaire(path)).first;
    return it->second;
  }

  template <typename Fn>
  void task(const std::string& name, Fn&& fn) {
    TaskStatus status{name, true, {}};
    try {
      fn();
    } catch (const std::exception& e) {
      status.ok = false;
      status.error = e.what();
    }
    std::lock_guard lock(mutex_);
    manifest_.tasks.push_back(std::move(status));
  }

  RunManifest finish() {
    for (const auto& [key, gw] : gateways_) manifest_.request_counts[key] = gw->request_attempts();
    gateways_.clear();  // closes request logs
    manifest_.finished_at = detail::utc_timestamp();
    std::sort(manifest_.files.begin(), manifest_.files.end());
    write_file_atomic(dir() / "manifest.json", to_json(manifest_).dump(2) + "\n");
    return manifest_;
  }

  static std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return out;
  }

 private:
  void add_file(const std::string& relative) {
    if (std::find(manifest_.files.begin(), manifest_.files.end(), relative) == manifest_.files.end())
      manifest_.files.push_back(relative);
  }

  const ExperimentConfig& cfg_;
  RunManifest manifest_;
  std::optional<TemplateSet> templates_;
  std::map<std::string, std::shared_ptr<Gateway>> gateways_;
  std::map<std::string, Questionnaire> questionnaires_;
  std::mutex mutex_;
};

inline std::filesystem::path make_run_dir(const std::filesystem::path& output_dir, ExperimentKind kind) {
  std::string stamp = detail::utc_timestamp();
  std::erase_if(stamp, [](char c) { return c == '-' || c == ':'; });
  auto base = output_dir / std::string(experiment_name(kind)) / stamp;
  auto dir = base;
  for (int i = 1; std::filesystem::exists(dir); ++i) dir = base.string() + "-" + std::to_string(i);
  return dir;
}

// ---- experiment bodies ----

namespace detail {

inline std::string file_stem(const std::string& s) { return RunContext::sanitize(s); }

inline std::vector<Transcript> generate_dialogues(RunContext& ctx, Gateway& gateway) {
  const auto& cfg = ctx.config();
  const PromptKind kind = cfg.prompt_kinds.front();
  const TraitScale scale = cfg.scales.front();
  std::vector<std::optional<Transcript>> out(static_cast<std::size_t>(cfg.dialogues));
  detail::parallel_for(out.size(), gateway.parallelism(), [&](std::size_t i) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "dialogue_%04zu", i + 1);
    const std::string id = id_buf;
    ctx.task("dialogue " + id, [&] {
      const auto seed = derive_seed(cfg.seed, id);
      auto make_agent = [&](const std::string& name, std::span<const Agent> existing) {
        const auto profile = random_profile(derive_seed(seed, name), scale);
        const auto persona = kind == PromptKind::neutral ? build_neutral_prompt(scale)
                                                         : build_prompt(kind, profile, ctx.templates());
        return spawn_agent(name, persona, profile, existing);
      };
      std::vector<Agent> agents;
      agents.push_back(make_agent("agent_a", agents));
      agents.push_back(make_agent("agent_b", agents));
      DialogueOptions opts;
      opts.dialogue_id = id;
      opts.topics = cfg.topics;
      opts.total_turns = cfg.turns;
      opts.seed = seed;
      std::ostringstream os;
      try {
        auto t = run_dialogue(agents[0], agents[1], opts, gateway, cfg.params);
        write_transcript(os, t);
        out[i] = std::move(t);
      } catch (const DialogueFailure& f) {
        write_transcript(os, f.partial);
        ctx.write("transcripts/" + id + ".jsonl", os.str());
        throw;
      }
      ctx.write("transcripts/" + id + ".jsonl", os.str());
    });
  });
  std::vector<Transcript> done;
  for (auto& t : out)
    if (t) done.push_back(std::move(*t));
  return done;
}

inline std::vector<Transcript> transcripts_for(RunContext& ctx) {
  const auto& cfg = ctx.config();
  if (cfg.transcripts.empty()) return generate_dialogues(ctx, ctx.gateway(cfg.backends.front()));
  std::vector<Transcript> out;
  for (const auto& p : cfg.transcripts) {
    ctx.task("load " + p.filename().string(), [&] { out.push_back(load_transcript(p)); });
  }
  return out;
}

inline void run_sweep(RunContext& ctx) {
  const auto& cfg = ctx.config();
  Gateway& gw = ctx.gateway(cfg.backends.front());
  for (const auto& qpath : cfg.questionnaires)
    for (PromptKind kind : cfg.prompt_kinds) {
      ctx.task("sweep " + std::string(prompt_kind_name(kind)) + " " + qpath.filename().string(), [&] {
        const auto& q = ctx.questionnaire(qpath);
        SweepConfig sc;
        sc.kind = kind;
        sc.scale = cfg.scales.front();
        sc.admin = ctx.admin_options();
        sc.variance = cfg.variance;
        sc.templates = &ctx.templates();
        const auto report = trait_sweep(gw, q, sc, cfg.seed);
        const auto stem = "sweep_" + std::string(prompt_kind_name(kind)) + "_" + file_stem(q.name);
        ctx.write(stem + ".json", to_json(report).dump(2) + "\n");
        ctx.write(stem + "_correlation.csv", sweep_correlation_table(report));
        ctx.write(stem + "_scores.csv", sweep_scores_table(report));
        for (const auto& t : report.traits)
          if (!t.correlation) throw Error(std::string(trait_name(t.trait)) + ": " + (t.flags.empty() ? "flagged" : t.flags.back()));
      });
    }
}

inline void run_induce(RunContext& ctx) {
  const auto& cfg = ctx.config();
  Gateway& gw = ctx.gateway(cfg.backends.front());
  for (const auto& qpath : cfg.questionnaires) {
    ctx.task("induce " + qpath.filename().string(), [&] {
      const auto& q = ctx.questionnaire(qpath);
      InductionConfig ic;
      ic.kinds = cfg.prompt_kinds;
      ic.scale = cfg.scales.front();
      ic.value = ic.scale.n();
      ic.admin = ctx.admin_options();
      ic.variance = cfg.variance;
      ic.templates = &ctx.templates();
      const auto table = single_trait_induction(gw, q, ic, cfg.seed);
      const auto stem = "induce_" + file_stem(q.name);
      ctx.write(stem + ".json", to_json(table).dump(2) + "\n");
      ctx.write(stem + ".csv", induction_table(table));
    });
  }
}

inline void run_dialogue_experiment(RunContext& ctx) {
  auto transcripts = generate_dialogues(ctx, ctx.gateway(ctx.config().backends.front()));
  std::ostringstream os;
  os << "dialogue_id,topic,utterances,agent_a,agent_b\n";
  for (const auto& t : transcripts) {
    auto brief = [](const BigFiveProfile& p) {
      std::ostringstream s;
      s << "O:" << p[Trait::openness] << " C:" << p[Trait::conscientiousness] << " E:" << p[Trait::extraversion]
        << " A:" << p[Trait::agreeableness] << " N:" << p[Trait::neuroticism];
      return s.str();
    };
    os << big5::detail::join_record({t.dialogue_id, t.topic, std::to_string(t.utterances.size()),
                                     brief(t.agents[0].profile), brief(t.agents[1].profile)})
       << '\n';
  }
  ctx.write("dialogues.csv", os.str());
}

inline void run_consistency(RunContext& ctx) {
  const auto& cfg = ctx.config();
  auto transcripts = transcripts_for(ctx);
  ctx.task("consistency", [&] {
    std::unique_ptr<SimilarityScorer> scorer;
    if (cfg.scorer.command.empty()) scorer = std::make_unique<TfCosineScorer>();
    else scorer = std::make_unique<ExternalProcessScorer>(cfg.scorer.command, cfg.scorer.name);
    std::vector<ConsistencyRow> rows;
    double sum = 0;
    for (const auto& t : transcripts)
      for (const auto& [agent, value] : consistency(t, *scorer)) {
        rows.push_back({t.dialogue_id, agent, value});
        sum += value;
      }
    ctx.write("consistency.csv", consistency_table(rows, scorer->name()));
    nlohmann::json summary = {{"report_type", "consistency"},
                              {"scorer", scorer->name()},
                              {"agents", rows.size()},
                              {"mean", rows.empty() ? nlohmann::json(nullptr) : nlohmann::json(sum / rows.size())}};
    ctx.write("consistency.json", summary.dump(2) + "\n");
  });
}

inline void run_judge(RunContext& ctx) {
  const auto& cfg = ctx.config();
  auto transcripts = transcripts_for(ctx);
  Gateway& judge = ctx.gateway(*cfg.judge_backend);
  ctx.task("judge", [&] {
    JudgeOptions jo;
    jo.params = cfg.params;
    jo.parse_retries = cfg.parse_retries;
    jo.tau = cfg.judge_tau;
    std::vector<JudgeReport> parts(transcripts.size());
    detail::parallel_for(transcripts.size(), judge.parallelism(),
                         [&](std::size_t i) { parts[i] = judge_dialogue(transcripts[i], judge, jo); });
    JudgeReport all;
    for (const auto& p : parts) all.merge(p);
    ctx.write("judge.json", to_json(all, judge.identifier()).dump(2) + "\n");
    ctx.write("judge_verdicts.csv", judge_verdict_table(all));
  });
}

inline void run_imitate(RunContext& ctx) {
  const auto& cfg = ctx.config();
  Gateway& gw = ctx.gateway(cfg.backends.front());
  ctx.task("imitate", [&] {
    const auto& q = ctx.questionnaire(cfg.questionnaires.front());
    const auto humans = load_human_scores(*cfg.human_scores);
    ImitationConfig ic;
    ic.kind = cfg.prompt_kinds.front();
    ic.scale = cfg.scales.front();
    ic.admin = ctx.admin_options();
    ic.variance = cfg.variance;
    ic.templates = &ctx.templates();
    const auto report = imitation_rmse(humans, gw, q, ic, cfg.seed);
    ctx.write("imitate.json", to_json(report).dump(2) + "\n");
    ctx.write("imitate.csv", imitation_table(report));
  });
}

inline void run_grid(RunContext& ctx) {
  const auto& cfg = ctx.config();
  ctx.task("grid", [&] {
    std::vector<GridBackend> backends;
    for (const auto& spec : cfg.backends) backends.push_back({spec.id, &ctx.gateway(spec)});
    std::vector<const Questionnaire*> qs;
    for (const auto& p : cfg.questionnaires) qs.push_back(&ctx.questionnaire(p));
    GridConfig gc;
    gc.scales = cfg.scales;
    gc.kinds = cfg.prompt_kinds;
    gc.agents_per_cell = cfg.agents_per_cell;
    gc.unreliable_threshold = cfg.unreliable_cell_threshold;
    gc.admin = ctx.admin_options();
    gc.templates = &ctx.templates();
    const auto report = fidelity_grid(backends, qs, gc, cfg.seed);
    ctx.write("grid.json", to_json(report).dump(2) + "\n");
    ctx.write("grid.csv", grid_table(report));
  });
}

inline void run_score(RunContext& ctx) {
  const auto& cfg = ctx.config();
  Gateway& gw = ctx.gateway(cfg.backends.front());
  ctx.task("score", [&] {
    const auto& q = ctx.questionnaire(cfg.questionnaires.front());
    const TraitScale scale = cfg.scales.front();
    const PromptKind kind = cfg.prompt_kinds.front();
    nlohmann::json results = nlohmann::json::array();
    std::ostringstream csv;
    csv << "profile";
    for (Trait t : kTraits) csv << ',' << trait_name(t) << "_mean," << trait_name(t) << "_variance";
    csv << '\n';
    for (std::size_t i = 0; i < cfg.profiles.size(); ++i) {
      const auto profile = profile_from_json(cfg.profiles[i], scale);
      const auto facets = expand_profile(profile, facet_overrides_from_json(cfg.profiles[i]));
      auto admin = ctx.admin_options();
      admin.seed = derive_seed(cfg.seed, "profile/" + std::to_string(i));
      const auto responses = administer(build_prompt(kind, facets, scale, ctx.templates()), q, gw, admin);
      const auto report = score(responses, q, cfg.variance);
      results.push_back({{"profile", facets_to_json(facets)}, {"report", to_json(report)},
                         {"responses", to_json(responses)}});
      csv << i;
      for (Trait t : kTraits) {
        if (report.has(t)) csv << ',' << format_number(report.at(t).mean) << ',' << format_number(report.at(t).variance);
        else csv << ",,";
      }
      csv << '\n';
    }
    ctx.write("score.json", nlohmann::json{{"report_type", "score"}, {"questionnaire", q.name},
                                           {"prompt_kind", std::string(prompt_kind_name(kind))},
                                           {"scale", scale.n()}, {"results", results}}
                                .dump(2) + "\n");
    ctx.write("score.csv", csv.str());
  });
}

}  // namespace detail

// Validated config in, manifest out. Task failures are recorded, not thrown.
inline RunManifest run_experiment(const ExperimentConfig& cfg, std::optional<std::filesystem::path> output_override = {}) {
  const auto out_root = output_override ? *output_override : cfg.output_dir;
  if (out_root.empty()) throw ConfigValidationError({"missing 'output_dir'"});
  RunContext ctx(cfg, make_run_dir(out_root, cfg.kind));
  switch (cfg.kind) {
    case ExperimentKind::induce: detail::run_induce(ctx); break;
    case ExperimentKind::sweep: detail::run_sweep(ctx); break;
    case ExperimentKind::dialogue: detail::run_dialogue_experiment(ctx); break;
    case ExperimentKind::consistency: detail::run_consistency(ctx); break;
    case ExperimentKind::judge: detail::run_judge(ctx); break;
    case ExperimentKind::imitate: detail::run_imitate(ctx); break;
    case ExperimentKind::grid: detail::run_grid(ctx); break;
    case ExperimentKind::score: detail::run_score(ctx); break;
  }
  return ctx.finish();
}

inline RunManifest run_experiment(const std::filesystem::path& config_path,
                                  std::optional<ExperimentKind> expected = std::nullopt,
                                  std::optional<std::filesystem::path> output_override = {}) {
  return run_experiment(load_experiment_config(config_path, expected), std::move(output_override));
}

}  // namespace big5
