#pragma once

// Report serialization: JSON documents tagged with "report_type" plus
// delimited tables laid out like the published result tables.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "big5/detail/csv.hpp"
#include "big5/eval.hpp"

namespace big5 {

inline std::string format_number(double x, int precision = 6) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << x;
  return os.str();
}

// p-values get significant digits; fixed notation would flatten them to zero.
inline std::string format_p_value(double p) {
  if (std::isnan(p)) return "nan";
  std::ostringstream os;
  os << std::setprecision(6) << p;
  return os.str();
}

inline nlohmann::json json_number(double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); }

// ---- sweep ----

inline nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json traits = nlohmann::json::array();
  for (const auto& t : r.traits) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& s : t.scores) scores.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
    nlohmann::json j = {{"trait", std::string(trait_name(t.trait))}, {"levels", t.levels}, {"scores", scores},
                        {"flags", t.flags}};
    if (t.correlation)
      j["correlation"] = {{"r", t.correlation->r}, {"p", t.correlation->p_value}, {"n", t.correlation->sample_count}};
    else
      j["correlation"] = nullptr;
    traits.push_back(std::move(j));
  }
  return {{"report_type", "sweep"},
          {"model", r.model},
          {"prompt_kind", std::string(prompt_kind_name(r.kind))},
          {"questionnaire", r.questionnaire},
          {"scale", r.scale.n()},
          {"administrations", r.administrations},
          {"traits", traits}};
}

// Correlation table: trait, r, p, n, flags.
inline std::string sweep_correlation_table(const SweepReport& r) {
  std::ostringstream os;
  os << "model,prompt_kind,questionnaire,trait,r,p,n,flags\n";
  for (const auto& t : r.traits) {
    std::string flags;
    for (const auto& f : t.flags) flags += (flags.empty() ? "" : "; ") + f;
    os << detail::join_record({r.model, std::string(prompt_kind_name(r.kind)), r.questionnaire,
                               std::string(trait_name(t.trait)),
                               t.correlation ? format_number(t.correlation->r) : "",
                               t.correlation ? format_p_value(t.correlation->p_value) : "",
                               t.correlation ? std::to_string(t.correlation->sample_count) : "", flags})
       << '\n';
  }
  return os.str();
}

// Long format: trait, level, score.
inline std::string sweep_scores_table(const SweepReport& r) {
  std::ostringstream os;
  os << "trait,level,score\n";
  for (const auto& t : r.traits)
    for (std::size_t i = 0; i < t.levels.size(); ++i)
      os << trait_name(t.trait) << ',' << t.levels[i] << ','
         << (t.scores[i] ? format_number(*t.scores[i]) : std::string()) << '\n';
  return os.str();
}

// ---- induction ----

inline nlohmann::json to_json(const InductionTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json traits = nlohmann::json::object();
    for (const auto& [trait, s] : row.traits)
      traits[std::string(trait_name(trait))] = {{"mean", s.mean}, {"variance", s.variance}, {"sd", s.sd()}};
    rows.push_back({{"method", std::string(prompt_kind_name(row.kind))}, {"traits", traits}, {"flags", row.flags}});
  }
  return {{"report_type", "induce"}, {"model", t.model}, {"questionnaire", t.questionnaire}, {"rows", rows}};
}

// One row per method; a mean and a standard deviation column per trait.
inline std::string induction_table(const InductionTable& t) {
  std::ostringstream os;
  os << "method";
  for (Trait trait : kTraits) os << ',' << trait_name(trait) << "_mean," << trait_name(trait) << "_sd";
  os << '\n';
  for (const auto& row : t.rows) {
    os << prompt_kind_name(row.kind);
    for (Trait trait : kTraits) {
      const auto it = row.traits.find(trait);
      if (it == row.traits.end()) os << ",,";
      else os << ',' << format_number(it->second.mean, 2) << ',' << format_number(it->second.sd(), 2);
    }
    os << '\n';
  }
  return os.str();
}

// ---- judge ----

inline constexpr double kRandomJudgeBaseline = 100.0 / 3.0;

inline nlohmann::json to_json(const JudgeReport& r, const std::string& judge) {
  return {{"report_type", "judge"},
          {"judge", judge},
          {"verdicts", r.total()},
          {"correct", r.correct()},
          {"invalid", r.invalid()},
          {"score", r.score()},
          {"random_baseline", kRandomJudgeBaseline},
          {"improvement", r.score() - kRandomJudgeBaseline}};
}

inline std::string judge_verdict_table(const JudgeReport& r) {
  std::ostringstream os;
  os << "dialogue_id,trait,truth,verdict,correct\n";
  for (const auto& e : r.entries)
    os << detail::join_record({e.dialogue_id, std::string(trait_name(e.trait)), std::string(verdict_name(e.truth)),
                               std::string(verdict_name(e.verdict)), e.correct ? "1" : "0"})
       << '\n';
  return os.str();
}

// ---- consistency ----

struct ConsistencyRow {
  std::string dialogue_id;
  std::string agent_id;
  double score;
};

inline std::string consistency_table(const std::vector<ConsistencyRow>& rows, const std::string& scorer) {
  std::ostringstream os;
  os << "dialogue_id,agent_id,scorer,score\n";
  for (const auto& r : rows)
    os << detail::join_record({r.dialogue_id, r.agent_id, scorer, format_number(r.score)}) << '\n';
  return os.str();
}

// ---- imitation ----

inline nlohmann::json to_json(const ImitationReport& r) {
  nlohmann::json persons = nlohmann::json::array();
  for (const auto& p : r.persons) {
    persons.push_back({{"person_id", p.person_id},
                       {"profile", to_json(p.profile)},
                       {"human", p.human},
                       {"agent", p.agent},
                       {"rmse", p.rmse ? nlohmann::json(*p.rmse) : nlohmann::json(nullptr)},
                       {"flags", p.flags}});
  }
  return {{"report_type", "imitate"},
          {"model", r.model},
          {"questionnaire", r.questionnaire},
          {"prompt_kind", std::string(prompt_kind_name(r.kind))},
          {"scale", r.scale.n()},
          {"persons", persons},
          {"mean_rmse", r.mean_rmse ? nlohmann::json(*r.mean_rmse) : nlohmann::json(nullptr)}};
}

inline std::string imitation_table(const ImitationReport& r) {
  std::ostringstream os;
  os << "person_id";
  for (Trait t : kTraits) os << ",human_" << trait_name(t) << ",agent_" << trait_name(t);
  os << ",rmse\n";
  for (const auto& p : r.persons) {
    os << detail::quote_field(p.person_id);
    for (std::size_t k = 0; k < 5; ++k) os << ',' << format_number(p.human[k], 3) << ',' << format_number(p.agent[k], 3);
    os << ',' << (p.rmse ? format_number(*p.rmse, 3) : std::string()) << '\n';
  }
  os << "mean,";
  for (int k = 0; k < 9; ++k) os << ',';
  os << (r.mean_rmse ? format_number(*r.mean_rmse, 3) : std::string()) << '\n';
  return os.str();
}

// ---- grid ----

inline nlohmann::json to_json(const GridReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"model", c.model},
                     {"scale", c.scale.n()},
                     {"prompt_kind", std::string(prompt_kind_name(c.kind))},
                     {"questionnaire", c.questionnaire},
                     {"rmse", json_number(c.rmse)},
                     {"agent_count", c.agent_count},
                     {"pair_count", c.pair_count},
                     {"unreliable_agents", c.unreliable_agents},
                     {"flagged", c.flagged}});
  return {{"report_type", "grid"}, {"questionnaires", r.questionnaires}, {"cells", cells}};
}

// model, scale, prompt, one RMSE column per questionnaire, average.
inline std::string grid_table(const GridReport& r) {
  std::ostringstream os;
  os << "model,scale,prompt";
  for (const auto& q : r.questionnaires) os << ',' << detail::quote_field(q);
  os << ",average\n";
  const std::size_t width = r.questionnaires.size();
  for (std::size_t i = 0; i + width <= r.cells.size() && width > 0; i += width) {
    const auto& first = r.cells[i];
    os << detail::quote_field(first.model) << ',' << first.scale.n() << ',' << prompt_kind_name(first.kind);
    double sum = 0;
    for (std::size_t k = 0; k < width; ++k) {
      os << ',' << format_number(r.cells[i + k].rmse, 3);
      sum += r.cells[i + k].rmse;
    }
    os << ',' << format_number(sum / static_cast<double>(width), 3) << '\n';
  }
  return os.str();
}

// ---- plot series ----

// Writes "trait,level,score" rows from a sweep report; traits without a
// correlation get a "# <trait> omitted: ..." note row instead.
inline void emit_plot_series(const nlohmann::json& report, std::ostream& out) {
  if (report.value("report_type", std::string()) != "sweep")
    throw InputError("plot series need a sweep report, got '" + report.value("report_type", std::string("unknown")) +
                     "'");
  out << "trait,level,score\n";
  for (const auto& t : report.at("traits")) {
    const auto name = t.at("trait").get<std::string>();
    if (t.at("correlation").is_null()) {
      std::string why;
      for (const auto& f : t.at("flags")) why += (why.empty() ? "" : "; ") + f.get<std::string>();
      out << "# " << name << " omitted: " << (why.empty() ? "flagged" : why) << '\n';
      continue;
    }
    const auto& levels = t.at("levels");
    const auto& scores = t.at("scores");
    for (std::size_t i = 0; i < levels.size(); ++i)
      out << name << ',' << levels[i].get<int>() << ',' << format_number(scores[i].get<double>()) << '\n';
  }
}

inline void emit_plot_series(const std::filesystem::path& report_path, const std::filesystem::path& out_path) {
  std::ifstream in(report_path);
  if (!in) throw LoadError("cannot read report " + report_path.string());
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(report_path.string() + ": " + e.what());
  }
  std::ostringstream body;
  emit_plot_series(report, body);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + out_path.string());
  out << body.str();
}

}  // namespace big5
