#pragma once

// Two-agent turn-based dialogue. Each agent's memory starts with its persona
// prompt; every utterance is appended to all participants' memories.

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "big5/detail/random.hpp"
#include "big5/detail/time.hpp"
#include "big5/errors.hpp"
#include "big5/gateway.hpp"
#include "big5/persona.hpp"
#include "big5/prompt.hpp"

namespace big5 {

inline const std::vector<std::string>& default_topics() {
  static const std::vector<std::string> topics = {"travel",  "music",        "habits",  "goals",
                                                  "friends", "social events", "animals", "volunteering",
                                                  "self-esteem", "anxiety"};
  return topics;
}

inline std::string topic_seed_message(const std::string& topic) { return "Let's talk about " + topic + "."; }

struct MemoryEntry {
  enum class Kind { persona, topic, utterance };
  Kind kind;
  std::string speaker;  // utterances only
  std::string text;
  friend bool operator==(const MemoryEntry&, const MemoryEntry&) = default;
};

// Append-only, ordered.
class MemoryBuffer {
 public:
  void append(MemoryEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const MemoryEntry& back() const { return entries_.back(); }

  std::size_t utterance_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto& e) {
      return e.kind == MemoryEntry::Kind::utterance;
    }));
  }

  friend bool operator==(const MemoryBuffer&, const MemoryBuffer&) = default;

 private:
  std::vector<MemoryEntry> entries_;
};

struct Agent {
  std::string id;
  PersonaPrompt persona;
  BigFiveProfile profile;
  MemoryBuffer memory;
};

struct Utterance {
  std::size_t turn_index = 0;  // 1-based
  std::string speaker;
  std::string text;
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct TranscriptAgent {
  std::string id;
  BigFiveProfile profile;
  PromptKind prompt_kind;
  TraitScale scale;
};

struct Transcript {
  std::string dialogue_id;
  std::string topic;
  std::uint64_t seed = 0;
  std::vector<TranscriptAgent> agents;
  std::vector<Utterance> utterances;
  GenerationParams params;
  std::string backend;
  std::string started_at;
  std::string finished_at;
  std::optional<std::string> failure;

  std::vector<const Utterance*> utterances_of(const std::string& speaker) const {
    std::vector<const Utterance*> out;
    for (const auto& u : utterances)
      if (u.speaker == speaker) out.push_back(&u);
    return out;
  }
};

// Memory holds the persona as its first element; empty for a neutral persona.
inline Agent spawn_agent(std::string id, PersonaPrompt persona, BigFiveProfile profile,
                         std::span<const Agent> existing = {}) {
  if (id.empty()) throw ConsistencyError("agent id must not be empty");
  for (const auto& other : existing)
    if (other.id == id) throw ConsistencyError("duplicate agent id '" + id + "'");
  Agent agent{std::move(id), std::move(persona), std::move(profile), {}};
  if (!agent.persona.empty()) agent.memory.append({MemoryEntry::Kind::persona, {}, agent.persona.text});
  return agent;
}

// The agent's view as chat messages: itself as assistant, everyone else as user.
inline std::vector<ChatMessage> memory_as_messages(const Agent& agent) {
  std::vector<ChatMessage> out;
  out.reserve(agent.memory.size());
  for (const auto& e : agent.memory.entries()) {
    switch (e.kind) {
      case MemoryEntry::Kind::persona: out.push_back({Role::system, e.text}); break;
      case MemoryEntry::Kind::topic: out.push_back({Role::user, e.text}); break;
      case MemoryEntry::Kind::utterance:
        out.push_back({e.speaker == agent.id ? Role::assistant : Role::user, e.text});
        break;
    }
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(first, last - first + 1));
}

// Generates the speaker's next utterance. Does not touch any memory.
inline Utterance take_turn(const Agent& speaker, Gateway& gateway, const GenerationParams& params) {
  RequestTags tags;
  tags.kind = RequestKind::dialogue;
  std::string text = trim(gateway.complete(memory_as_messages(speaker), params, tags));
  if (text.empty()) throw GenerationError("agent " + speaker.id + " produced an empty utterance");
  return Utterance{speaker.memory.utterance_count() + 1, speaker.id, std::move(text)};
}

inline void broadcast(const Utterance& u, std::span<Agent* const> agents) {
  for (Agent* a : agents) a->memory.append({MemoryEntry::Kind::utterance, u.speaker, u.text});
}

inline std::string pick_topic(std::uint64_t seed, const std::vector<std::string>& topics) {
  if (topics.empty()) throw ConfigError("topic list is empty");
  std::mt19937_64 rng(detail::derive_seed(seed, "topic"));
  return topics[static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<std::int64_t>(topics.size()) - 1))];
}

struct DialogueOptions {
  std::string dialogue_id = "dialogue";
  std::optional<std::string> topic;  // drawn from `topics` by seed when absent
  std::vector<std::string> topics = default_topics();
  int total_turns = 20;
  std::uint64_t seed = 0;
};

// Thrown when the backend fails mid-dialogue; carries the partial transcript.
struct DialogueFailure : Error {
  DialogueFailure(const std::string& what, Transcript partial_)
      : Error(what), partial(std::move(partial_)) {}
  Transcript partial;
};

inline Transcript run_dialogue(Agent& a, Agent& b, const DialogueOptions& options, Gateway& gateway,
                               const GenerationParams& params) {
  if (options.total_turns < 2 || options.total_turns % 2 != 0)
    throw ConfigError("total_turns must be even and >= 2, got " + std::to_string(options.total_turns));
  if (a.id == b.id) throw ConsistencyError("duplicate agent id '" + a.id + "'");

  Transcript t;
  t.dialogue_id = options.dialogue_id;
  t.topic = options.topic ? *options.topic : pick_topic(options.seed, options.topics);
  t.seed = options.seed;
  t.params = params;
  t.backend = gateway.identifier();
  for (const Agent* ag : {&a, &b})
    t.agents.push_back({ag->id, ag->profile, ag->persona.kind, ag->persona.scale});
  t.started_at = detail::utc_timestamp();

  const std::string seed_msg = topic_seed_message(t.topic);
  a.memory.append({MemoryEntry::Kind::topic, {}, seed_msg});
  b.memory.append({MemoryEntry::Kind::topic, {}, seed_msg});

  Agent* const both[] = {&a, &b};
  for (int j = 1; j <= options.total_turns; ++j) {
    Agent& speaker = (j % 2 == 1) ? a : b;
    try {
      Utterance u = take_turn(speaker, gateway, params);
      u.turn_index = static_cast<std::size_t>(j);
      broadcast(u, both);
      t.utterances.push_back(std::move(u));
    } catch (const Error& e) {
      t.failure = "turn " + std::to_string(j) + ": " + e.what();
      t.finished_at = detail::utc_timestamp();
      throw DialogueFailure(*t.failure, std::move(t));
    }
  }
  t.finished_at = detail::utc_timestamp();
  return t;
}

// ---- persistence: one JSON record per line ----

inline void write_transcript(std::ostream& out, const Transcript& t) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& ag : t.agents)
    agents.push_back({{"id", ag.id},
                      {"profile", to_json(ag.profile)},
                      {"prompt_kind", std::string(prompt_kind_name(ag.prompt_kind))},
                      {"scale", ag.scale.n()}});
  nlohmann::json header = {{"type", "header"},   {"dialogue_id", t.dialogue_id}, {"topic", t.topic},
                           {"seed", t.seed},     {"agents", agents},             {"params", to_json(t.params)},
                           {"backend", t.backend}, {"started_at", t.started_at}};
  out << header.dump() << '\n';
  for (const auto& u : t.utterances) {
    nlohmann::json rec = {{"type", "utterance"}, {"dialogue_id", t.dialogue_id}, {"turn", u.turn_index},
                          {"speaker", u.speaker}, {"text", u.text}};
    out << rec.dump() << '\n';
  }
  if (t.failure) {
    out << nlohmann::json{{"type", "failure"}, {"dialogue_id", t.dialogue_id}, {"error", *t.failure}}.dump()
        << '\n';
  }
  out << nlohmann::json{{"type", "end"}, {"dialogue_id", t.dialogue_id}, {"finished_at", t.finished_at}}.dump()
      << '\n';
}

inline Transcript read_transcript(std::istream& in, const std::string& source = "transcript") {
  Transcript t;
  bool have_header = false;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const auto type = rec.value("type", std::string());
    if (type == "header") {
      have_header = true;
      t.dialogue_id = rec.at("dialogue_id").get<std::string>();
      t.topic = rec.at("topic").get<std::string>();
      t.seed = rec.value("seed", std::uint64_t{0});
      t.params = params_from_json(rec.at("params"));
      t.backend = rec.value("backend", std::string());
      t.started_at = rec.value("started_at", std::string());
      for (const auto& ag : rec.at("agents")) {
        const TraitScale scale(ag.at("scale").get<int>());
        t.agents.push_back({ag.at("id").get<std::string>(), profile_from_json(ag.at("profile"), scale),
                            parse_prompt_kind(ag.at("prompt_kind").get<std::string>()), scale});
      }
    } else if (type == "utterance") {
      t.utterances.push_back({rec.at("turn").get<std::size_t>(), rec.at("speaker").get<std::string>(),
                              rec.at("text").get<std::string>()});
    } else if (type == "failure") {
      t.failure = rec.at("error").get<std::string>();
    } else if (type == "end") {
      t.finished_at = rec.value("finished_at", std::string());
    } else {
      throw LoadError(source + ":" + std::to_string(line_no) + ": unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw LoadError(source + ": missing header record");
  return t;
}

inline Transcript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read transcript " + path.string());
  return read_transcript(in, path.string());
}

}  // namespace big5
