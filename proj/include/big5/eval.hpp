#pragma once

// Evaluation procedures: intra-dialogue consistency, judge identification,
// proportional trait sweep, single-trait induction, human imitation RMSE and
// the model x scale x prompt-kind fidelity grid.

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "big5/detail/csv.hpp"
#include "big5/detail/random.hpp"
#include "big5/dialogue.hpp"
#include "big5/errors.hpp"
#include "big5/gateway.hpp"
#include "big5/persona.hpp"
#include "big5/prompt.hpp"
#include "big5/psychometrics.hpp"
#include "big5/scorer.hpp"
#include "big5/stats.hpp"

namespace big5 {

// ===================== consistency =====================

// Per agent: similarity of its first k-1 utterances (space-joined) to its k-th.
inline std::map<std::string, double> consistency(const Transcript& transcript, SimilarityScorer& scorer) {
  std::map<std::string, double> out;
  for (const auto& agent : transcript.agents) {
    const auto own = transcript.utterances_of(agent.id);
    if (own.size() < 2)
      throw InputError("agent " + agent.id + " has " + std::to_string(own.size()) +
                       " utterance(s); consistency needs at least 2");
    std::string head;
    for (std::size_t i = 0; i + 1 < own.size(); ++i) {
      if (i) head += ' ';
      head += own[i]->text;
    }
    out[agent.id] = scorer.similarity(head, own.back()->text);
  }
  return out;
}

// ===================== judge identification =====================

enum class Verdict { a_higher, b_higher, similar, invalid };

inline std::string_view verdict_name(Verdict v) {
  constexpr std::array<std::string_view, 4> names = {"A", "B", "similar", "invalid"};
  return names[static_cast<std::size_t>(v)];
}

// |va - vb| <= tau counts as similar.
inline Verdict judge_ground_truth(int va, int vb, int tau = 0) {
  if (std::abs(va - vb) <= tau) return Verdict::similar;
  return va > vb ? Verdict::a_higher : Verdict::b_higher;
}

// Unique label among the first line's tokens: A, B, or similar/same/equal.
inline Verdict parse_verdict(std::string_view text) {
  std::string first;
  {
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);)
      if (l.find_first_not_of(" \t\r") != std::string::npos) {
        first = l;
        break;
      }
  }
  std::set<Verdict> found;
  std::string cleaned;
  for (char c : first) {
    const auto u = static_cast<unsigned char>(c);
    cleaned += (u < 128 && std::ispunct(u)) ? ' ' : static_cast<char>(std::tolower(u));
  }
  std::istringstream toks(cleaned);
  for (std::string tok; toks >> tok;) {
    if (tok == "a") found.insert(Verdict::a_higher);
    else if (tok == "b") found.insert(Verdict::b_higher);
    else if (tok == "similar" || tok == "same" || tok == "equal") found.insert(Verdict::similar);
  }
  if (found.size() != 1) throw ParseError("judge reply names " + std::to_string(found.size()) + " verdicts");
  return *found.begin();
}

inline constexpr std::string_view kJudgeInstructionVersion = "judge-v1";
inline constexpr std::string_view kJudgeInstruction =
    "Below is a dialogue between two agents, Agent A and Agent B.\n"
    "\n"
    "{transcript}\n"
    "\n"
    "Question: Which agent shows a higher level of {trait}? If both show about the same level, answer "
    "\"similar\".\n"
    "Answer with exactly one of: A, B, similar.";

// First-listed agent is "Agent A".
inline std::string render_judge_prompt(const Transcript& t, Trait trait) {
  if (t.agents.size() != 2) throw InputError("judging needs exactly two agents");
  std::string body;
  for (const auto& u : t.utterances) {
    if (!body.empty()) body += '\n';
    body += u.speaker == t.agents[0].id ? "Agent A: " : "Agent B: ";
    for (char c : u.text) body += (c == '\n' || c == '\r') ? ' ' : c;
  }
  std::string out(kJudgeInstruction);
  auto replace = [&](std::string_view key, const std::string& value) {
    const auto pos = out.find(key);
    out.replace(pos, key.size(), value);
  };
  replace("{transcript}", body);
  replace("{trait}", std::string(trait_name(trait)));
  return out;
}

struct JudgeEntry {
  std::string dialogue_id;
  Trait trait;
  Verdict truth;
  Verdict verdict;
  bool correct;
  std::string raw;
};

struct JudgeReport {
  std::vector<JudgeEntry> entries;

  std::size_t total() const { return entries.size(); }
  std::size_t correct() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](auto& e) { return e.correct; }));
  }
  std::size_t invalid() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](auto& e) { return e.verdict == Verdict::invalid; }));
  }
  // 100 x correct / total, pooled over every verdict.
  double score() const { return total() ? 100.0 * static_cast<double>(correct()) / static_cast<double>(total()) : 0.0; }

  void merge(const JudgeReport& other) { entries.insert(entries.end(), other.entries.begin(), other.entries.end()); }
};

struct JudgeOptions {
  GenerationParams params;
  int parse_retries = 2;
  int tau = 0;
};

inline JudgeReport judge_dialogue(const Transcript& transcript, const BigFiveProfile& a, const BigFiveProfile& b,
                                  Gateway& judge, const JudgeOptions& opts = {}) {
  if (!(a.scale() == b.scale())) throw ConsistencyError("judged profiles use different scales");
  if (transcript.failure) throw InputError("transcript " + transcript.dialogue_id + " is incomplete");
  JudgeReport report;
  for (Trait trait : kTraits) {
    ChatRequest req;
    req.messages.push_back({Role::user, render_judge_prompt(transcript, trait)});
    req.params = opts.params;
    req.tags.kind = RequestKind::judge;
    req.tags.trait = trait;
    JudgeEntry entry{transcript.dialogue_id, trait, judge_ground_truth(a[trait], b[trait], opts.tau),
                     Verdict::invalid, false, {}};
    for (int attempt = 0; attempt <= opts.parse_retries; ++attempt) {
      try {
        entry.raw = judge.complete(req);
        entry.verdict = parse_verdict(entry.raw);
        break;
      } catch (const ParseError&) {
      } catch (const TransportError& e) {
        entry.raw = e.what();
        break;
      }
    }
    entry.correct = entry.verdict == entry.truth;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

inline JudgeReport judge_dialogue(const Transcript& transcript, Gateway& judge, const JudgeOptions& opts = {}) {
  if (transcript.agents.size() != 2) throw InputError("judging needs exactly two agents");
  return judge_dialogue(transcript, transcript.agents[0].profile, transcript.agents[1].profile, judge, opts);
}

// ===================== proportional sweep =====================

inline const TemplateSet& templates_or_default(const TemplateSet* t) { return t ? *t : default_templates(); }

struct SweepConfig {
  PromptKind kind = PromptKind::simple;
  TraitScale scale{100};
  std::vector<int> levels = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90};
  int neutral_value = 50;
  AdministerOptions admin;
  VarianceKind variance = VarianceKind::population;
  const TemplateSet* templates = nullptr;
  std::vector<Trait> traits{kTraits.begin(), kTraits.end()};
};

struct TraitSweep {
  Trait trait;
  std::vector<int> levels;
  std::vector<std::optional<double>> scores;  // measured target-trait mean per level
  std::optional<CorrelationResult> correlation;
  std::vector<std::string> flags;
};

struct SweepReport {
  std::string model;
  PromptKind kind;
  std::string questionnaire;
  TraitScale scale{100};
  std::size_t administrations = 0;
  std::vector<TraitSweep> traits;
};

inline SweepReport trait_sweep(Gateway& gateway, const Questionnaire& q, const SweepConfig& cfg, std::uint64_t seed) {
  for (Trait t : cfg.traits)
    if (q.count(t) == 0) throw InputError("questionnaire " + q.name + " has no " + std::string(trait_name(t)) + " items");
  if (!is_scaler_kind(cfg.kind)) throw ConfigError("sweeps need a simple, specific or simspec prompt");
  SweepReport report{gateway.identifier(), cfg.kind, q.name, cfg.scale, 0, {}};
  for (Trait trait : cfg.traits) {
    TraitSweep ts{trait, cfg.levels, {}, std::nullopt, {}};
    bool failed = false;
    for (int level : cfg.levels) {
      const auto profile = BigFiveProfile::uniform(cfg.neutral_value, cfg.scale).with(trait, level);
      const auto prompt = build_prompt(cfg.kind, profile, templates_or_default(cfg.templates));
      auto admin = cfg.admin;
      admin.seed = detail::derive_seed(seed, std::string(trait_name(trait)) + "/" + std::to_string(level));
      const auto responses = administer(prompt, q, gateway, admin);
      ++report.administrations;
      const auto scored = score(responses, q, cfg.variance);
      if (responses.unreliable)
        ts.flags.push_back("level " + std::to_string(level) + ": unreliable administration (" +
                           std::to_string(responses.missing()) + " missing)");
      if (!scored.has(trait)) {
        ts.flags.push_back("level " + std::to_string(level) + ": no answered items");
        ts.scores.push_back(std::nullopt);
        failed = true;
        continue;
      }
      if (responses.unreliable) failed = true;
      ts.scores.push_back(scored.at(trait).mean);
    }
    if (failed) {
      ts.flags.push_back("correlation omitted: failed administrations");
    } else {
      std::vector<double> xs(ts.levels.begin(), ts.levels.end());
      std::vector<double> ys;
      for (const auto& s : ts.scores) ys.push_back(*s);
      try {
        ts.correlation = pearson(xs, ys);
      } catch (const StatisticsError& e) {
        ts.flags.push_back(std::string("correlation omitted: ") + e.what());
      }
    }
    report.traits.push_back(std::move(ts));
  }
  return report;
}

// ===================== single-trait induction =====================

struct InductionConfig {
  std::vector<PromptKind> kinds = {PromptKind::neutral, PromptKind::naive, PromptKind::simple,
                                   PromptKind::specific, PromptKind::simspec};
  int value = 100;
  TraitScale scale{100};
  AdministerOptions admin;
  VarianceKind variance = VarianceKind::population;
  const TemplateSet* templates = nullptr;
};

struct InductionRow {
  PromptKind kind;
  std::map<Trait, TraitScore> traits;  // target-trait score under that trait's prompt
  std::vector<std::string> flags;
};

struct InductionTable {
  std::string model;
  std::string questionnaire;
  std::vector<InductionRow> rows;
};

inline InductionTable single_trait_induction(Gateway& gateway, const Questionnaire& q, const InductionConfig& cfg,
                                             std::uint64_t seed) {
  InductionTable table{gateway.identifier(), q.name, {}};
  for (PromptKind kind : cfg.kinds) {
    InductionRow row{kind, {}, {}};
    for (Trait trait : kTraits) {
      const auto prompt = build_single_trait_prompt(kind, trait, cfg.value, cfg.scale, templates_or_default(cfg.templates));
      auto admin = cfg.admin;
      admin.seed = detail::derive_seed(seed, std::string(prompt_kind_name(kind)) + "/" + std::string(trait_name(trait)));
      const auto responses = administer(prompt, q, gateway, admin);
      const auto scored = score(responses, q, cfg.variance);
      if (responses.unreliable) row.flags.push_back(std::string(trait_name(trait)) + ": unreliable administration");
      if (scored.has(trait)) row.traits[trait] = scored.at(trait);
      else row.flags.push_back(std::string(trait_name(trait)) + ": no answered items");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ===================== human imitation =====================

struct HumanScores {
  std::string person_id;
  std::array<double, 5> scores{};  // O, C, E, A, N on the questionnaire scale
};

// Columns: person_id, openness, conscientiousness, extraversion, agreeableness, neuroticism.
inline std::vector<HumanScores> read_human_scores(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  char delim = ',';
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::strip(line).empty() || detail::strip(line)[0] == '#') continue;
    delim = line.find('\t') != std::string::npos ? '\t' : ',';
    header = detail::split_record(line, delim);
    for (auto& h : header) h = detail::lower(detail::strip(h));
    break;
  }
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw LoadError(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_id = col("person_id");
  std::array<std::size_t, 5> c_traits{};
  for (Trait t : kTraits) c_traits[static_cast<std::size_t>(t)] = col(std::string(trait_name(t)));

  std::vector<HumanScores> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::strip(line).empty() || detail::strip(line)[0] == '#') continue;
    const auto f = detail::split_record(line, delim);
    if (f.size() < header.size()) throw LoadError(source + ":" + std::to_string(line_no) + ": too few fields");
    HumanScores h;
    h.person_id = detail::strip(f[c_id]);
    for (std::size_t k = 0; k < 5; ++k) {
      try {
        h.scores[k] = std::stod(detail::strip(f[c_traits[k]]));
      } catch (const std::logic_error&) {
        throw LoadError(source + ":" + std::to_string(line_no) + ": non-numeric score for " + h.person_id);
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

inline std::vector<HumanScores> load_human_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read human scores " + path.string());
  return read_human_scores(in, path.string());
}

struct ImitationConfig {
  PromptKind kind = PromptKind::simple;
  TraitScale scale{100};
  AdministerOptions admin;
  VarianceKind variance = VarianceKind::population;
  const TemplateSet* templates = nullptr;
};

struct PersonImitation {
  std::string person_id;
  BigFiveProfile profile;
  std::array<double, 5> human{};
  std::array<double, 5> agent{};
  std::optional<double> rmse;
  std::vector<std::string> flags;
};

struct ImitationReport {
  std::string model;
  std::string questionnaire;
  PromptKind kind;
  TraitScale scale{100};
  std::vector<PersonImitation> persons;
  std::optional<double> mean_rmse;  // over persons with a complete score vector
};

// Human questionnaire score -> trait intensity on the prompt scale (nearest integer, halves up).
inline BigFiveProfile profile_from_human(const HumanScores& h, int lo, int hi, TraitScale scale) {
  std::array<int, 5> values{};
  for (std::size_t k = 0; k < 5; ++k) {
    const double x = h.scores[k];
    if (x < lo || x > hi)
      throw InputError("person " + h.person_id + ": " + std::string(trait_name(kTraits[k])) + " score " +
                       std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    values[k] = static_cast<int>(std::floor(rescale_likert(x, lo, hi, scale) + 0.5));
  }
  return BigFiveProfile(values, scale);
}

inline ImitationReport imitation_rmse(const std::vector<HumanScores>& humans, Gateway& gateway, const Questionnaire& q,
                                      const ImitationConfig& cfg, std::uint64_t seed) {
  std::vector<BigFiveProfile> profiles;
  for (const auto& h : humans) profiles.push_back(profile_from_human(h, q.likert_min, q.likert_max, cfg.scale));

  ImitationReport report{gateway.identifier(), q.name, cfg.kind, cfg.scale, {}, std::nullopt};
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < humans.size(); ++i) {
    PersonImitation p{humans[i].person_id, profiles[i], humans[i].scores, {}, std::nullopt, {}};
    auto admin = cfg.admin;
    admin.seed = detail::derive_seed(seed, "person/" + humans[i].person_id);
    const auto responses = administer(build_prompt(cfg.kind, profiles[i], templates_or_default(cfg.templates)), q, gateway, admin);
    const auto scored = score(responses, q, cfg.variance);
    if (responses.unreliable) p.flags.push_back("unreliable administration");
    bool complete = true;
    for (Trait t : kTraits) {
      if (scored.has(t)) {
        p.agent[static_cast<std::size_t>(t)] = scored.at(t).mean;
      } else {
        complete = false;
        p.flags.push_back(std::string(trait_name(t)) + ": no answered items");
      }
    }
    if (complete) {
      p.rmse = rmse(p.agent, p.human);
      sum += *p.rmse;
      ++counted;
    }
    report.persons.push_back(std::move(p));
  }
  if (counted) report.mean_rmse = sum / static_cast<double>(counted);
  return report;
}

// ===================== fidelity grid =====================

struct GridBackend {
  std::string model;
  Gateway* gateway;
};

struct GridConfig {
  std::vector<TraitScale> scales = {TraitScale(10), TraitScale(25), TraitScale(50), TraitScale(100)};
  std::vector<PromptKind> kinds = {PromptKind::simple, PromptKind::specific, PromptKind::simspec};
  int agents_per_cell = 50;
  double unreliable_threshold = 0.10;  // fraction of agents per cell
  AdministerOptions admin;
  const TemplateSet* templates = nullptr;
};

struct GridCell {
  std::string model;
  TraitScale scale{100};
  PromptKind kind;
  std::string questionnaire;
  double rmse = 0;  // on the 0-100 scale
  int agent_count = 0;
  std::size_t pair_count = 0;
  std::size_t unreliable_agents = 0;
  bool flagged = false;
};

struct GridReport {
  std::vector<GridCell> cells;
  std::vector<std::string> questionnaires;
};

inline std::uint64_t grid_cell_seed(std::uint64_t seed, const std::string& model, int scale, PromptKind kind,
                                    const std::string& questionnaire) {
  return detail::derive_seed(seed, model + "|" + std::to_string(scale) + "|" + std::string(prompt_kind_name(kind)) +
                                       "|" + questionnaire);
}

inline GridCell grid_cell(const GridBackend& backend, TraitScale scale, PromptKind kind, const Questionnaire& q,
                          const GridConfig& cfg, std::uint64_t seed) {
  GridCell cell{backend.model, scale, kind, q.name, 0.0, cfg.agents_per_cell, 0, 0, false};
  const auto cell_seed = grid_cell_seed(seed, backend.model, scale.n(), kind, q.name);
  const TraitScale hundred(100);
  std::vector<double> assigned, measured;
  for (int a = 0; a < cfg.agents_per_cell; ++a) {
    const auto profile = random_profile(detail::derive_seed(cell_seed, static_cast<std::uint64_t>(a)), scale);
    auto admin = cfg.admin;
    admin.seed = detail::derive_seed(cell_seed, "admin/" + std::to_string(a));
    const auto responses = administer(build_prompt(kind, profile, templates_or_default(cfg.templates)), q, *backend.gateway, admin);
    if (responses.unreliable) ++cell.unreliable_agents;
    const auto scored = score(responses, q);
    for (Trait t : kTraits) {
      if (!scored.has(t)) continue;
      assigned.push_back(rescale(profile[t], scale, hundred).to_double());
      measured.push_back(rescale_likert(scored.at(t).mean, q.likert_min, q.likert_max, hundred));
    }
  }
  cell.pair_count = assigned.size();
  if (assigned.empty()) {
    cell.flagged = true;
    cell.rmse = std::nan("");
  } else {
    cell.rmse = rmse(assigned, measured);
  }
  if (static_cast<double>(cell.unreliable_agents) > cfg.unreliable_threshold * cfg.agents_per_cell) cell.flagged = true;
  return cell;
}

// Cells ordered backend x scale x kind x questionnaire.
inline GridReport fidelity_grid(const std::vector<GridBackend>& backends, const std::vector<const Questionnaire*>& qs,
                                const GridConfig& cfg, std::uint64_t seed) {
  GridReport report;
  for (const auto* q : qs) report.questionnaires.push_back(q->name);
  for (const auto& backend : backends)
    for (const auto& scale : cfg.scales)
      for (PromptKind kind : cfg.kinds)
        for (const auto* q : qs) report.cells.push_back(grid_cell(backend, scale, kind, *q, cfg, seed));
  return report;
}

}  // namespace big5
