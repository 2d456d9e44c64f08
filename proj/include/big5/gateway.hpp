#pragma once

// Chat-completion gateway: message types, generation parameters, the backend
// interface, and a Gateway wrapper adding retries, a fair parallelism limit
// and an optional request log.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "big5/errors.hpp"
#include "big5/persona.hpp"

namespace big5 {

enum class Role { system, user, assistant };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

inline Role parse_role(std::string_view s) {
  if (s == "system") return Role::system;
  if (s == "user") return Role::user;
  if (s == "assistant") return Role::assistant;
  throw ProtocolError("unknown chat role '" + std::string(s) + "'");
}

struct ChatMessage {
  Role role;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GenerationParams {
  int max_new_tokens = 512;
  double temperature = 1.0;
  double top_p = 0.8;

  void validate() const {
    if (max_new_tokens < 1) throw ConfigError("max_new_tokens must be positive");
    if (temperature < 0) throw ConfigError("temperature must be non-negative");
    if (!(top_p > 0 && top_p <= 1)) throw ConfigError("top_p must lie in (0, 1]");
  }
  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

enum class RequestKind { chat, likert, dialogue, judge };

// Out-of-band facts about a request. Never sent over the wire; scripted
// backends read them to answer analytically.
struct RequestTags {
  RequestKind kind = RequestKind::chat;
  std::optional<Trait> trait;
  bool reverse_keyed = false;
  int likert_min = 1;
  int likert_max = 5;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  GenerationParams params;
  RequestTags tags;
};

// At most one system message, first if present; user/assistant content non-empty.
inline void validate_messages(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw ConsistencyError("chat request has no messages");
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto& m = messages[i];
    if (m.role == Role::system && i != 0) throw ConsistencyError("system message must come first");
    if (m.role != Role::system && m.content.empty())
      throw ConsistencyError("empty " + std::string(role_name(m.role)) + " message");
  }
}

class Backend {
 public:
  virtual ~Backend() = default;
  // Throws TransportError (retryable or not) or ProtocolError.
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::string identifier() const = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{30000};
};

enum class BackendKind { http_chat, scripted };

struct BackendSpec {
  std::string id;
  BackendKind kind = BackendKind::scripted;
  std::string endpoint;        // http_chat: full URL of the chat-completions route
  std::string model;           // http_chat: model identifier
  std::string credential_env;  // name of the environment variable holding the key
  std::string behavior;        // scripted: behavior profile
  RetryPolicy retry;
  int parallelism = 4;
  std::chrono::seconds timeout{60};
};

// ---- JSON forms shared by the wire format and the request log ----

inline nlohmann::json to_json(const ChatMessage& m) {
  return {{"role", std::string(role_name(m.role))}, {"content", m.content}};
}

inline nlohmann::json to_json(const GenerationParams& p) {
  return {{"max_new_tokens", p.max_new_tokens}, {"temperature", p.temperature}, {"top_p", p.top_p}};
}

inline GenerationParams params_from_json(const nlohmann::json& j) {
  GenerationParams p;
  p.max_new_tokens = j.value("max_new_tokens", p.max_new_tokens);
  p.temperature = j.value("temperature", p.temperature);
  p.top_p = j.value("top_p", p.top_p);
  return p;
}

inline nlohmann::json to_json(const RequestTags& t) {
  constexpr std::array<const char*, 4> kinds = {"chat", "likert", "dialogue", "judge"};
  nlohmann::json j = {{"kind", kinds[static_cast<std::size_t>(t.kind)]}};
  if (t.trait) j["trait"] = std::string(trait_name(*t.trait));
  if (t.kind == RequestKind::likert) {
    j["reverse_keyed"] = t.reverse_keyed;
    j["likert_min"] = t.likert_min;
    j["likert_max"] = t.likert_max;
  }
  return j;
}

inline RequestTags tags_from_json(const nlohmann::json& j) {
  RequestTags t;
  const auto kind = j.value("kind", std::string("chat"));
  if (kind == "likert") t.kind = RequestKind::likert;
  else if (kind == "dialogue") t.kind = RequestKind::dialogue;
  else if (kind == "judge") t.kind = RequestKind::judge;
  if (j.contains("trait")) t.trait = parse_trait(j["trait"].get<std::string>());
  t.reverse_keyed = j.value("reverse_keyed", false);
  t.likert_min = j.value("likert_min", 1);
  t.likert_max = j.value("likert_max", 5);
  return t;
}

inline nlohmann::json to_json(const ChatRequest& r) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : r.messages) msgs.push_back(to_json(m));
  return {{"messages", msgs}, {"params", to_json(r.params)}, {"tags", to_json(r.tags)}};
}

inline ChatRequest request_from_json(const nlohmann::json& j) {
  ChatRequest r;
  for (const auto& m : j.at("messages"))
    r.messages.push_back({parse_role(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
  r.params = params_from_json(j.at("params"));
  if (j.contains("tags")) r.tags = tags_from_json(j["tags"]);
  return r;
}

// FIFO counting limiter: callers are admitted in arrival order, at most
// `limit` at a time.
class FairLimiter {
 public:
  explicit FairLimiter(int limit) : limit_(std::max(1, limit)) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    const std::uint64_t ticket = next_ticket_++;
    cv_.wait(lock, [&] { return ticket == now_serving_ && in_flight_ < limit_; });
    ++now_serving_;
    ++in_flight_;
    cv_.notify_all();
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      --in_flight_;
    }
    cv_.notify_all();
  }

  int limit() const { return limit_; }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t now_serving_ = 0;
  int in_flight_ = 0;
  const int limit_;
};

// Line-delimited request/response records; safe for concurrent writers.
class RequestLog {
 public:
  explicit RequestLog(const std::filesystem::path& path) : path_(path), out_(path, std::ios::app) {
    if (!out_) throw ConfigError("cannot open request log " + path.string());
  }

  void record(const std::string& backend, const ChatRequest& request, const std::string* response,
              int attempts, const std::string& error = {}) {
    nlohmann::json rec = {{"backend", backend}, {"request", to_json(request)}, {"attempts", attempts}};
    if (response) rec["response"] = *response;
    else rec["error"] = error;
    std::lock_guard lock(mutex_);
    out_ << rec.dump() << '\n';
    out_.flush();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

inline std::string strip_trailing_whitespace(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Gateway(std::shared_ptr<Backend> backend, RetryPolicy retry = {}, int parallelism = 4)
      : backend_(std::move(backend)), retry_(retry), limiter_(parallelism),
        sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }),
        jitter_(std::random_device{}()) {
    if (retry_.max_attempts < 1) retry_.max_attempts = 1;
  }

  void set_request_log(std::shared_ptr<RequestLog> log) { log_ = std::move(log); }
  void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }

  std::string complete(const std::vector<ChatMessage>& messages, const GenerationParams& params,
                       const RequestTags& tags = {}) {
    return complete(ChatRequest{messages, params, tags});
  }

  std::string complete(const ChatRequest& request) {
    validate_messages(request.messages);
    limiter_.acquire();
    struct Release {
      FairLimiter& l;
      ~Release() { l.release(); }
    } release{limiter_};

    std::vector<std::string> attempt_log;
    for (int attempt = 1;; ++attempt) {
      attempts_.fetch_add(1, std::memory_order_relaxed);
      try {
        std::string text = strip_trailing_whitespace(backend_->complete(request));
        calls_.fetch_add(1, std::memory_order_relaxed);
        if (log_) log_->record(backend_->identifier(), request, &text, attempt);
        return text;
      } catch (const TransportError& e) {
        attempt_log.push_back("attempt " + std::to_string(attempt) + ": " + e.what());
        if (!e.retryable || attempt >= retry_.max_attempts) {
          failures_.fetch_add(1, std::memory_order_relaxed);
          if (log_) log_->record(backend_->identifier(), request, nullptr, attempt, e.what());
          throw TransportError("request failed after " + std::to_string(attempt) + " attempt(s): " + e.what(),
                               false, std::move(attempt_log));
        }
      } catch (const ProtocolError& e) {
        failures_.fetch_add(1, std::memory_order_relaxed);
        if (log_) log_->record(backend_->identifier(), request, nullptr, attempt, e.what());
        throw;
      }
      sleeper_(backoff(attempt));
    }
  }

  // Full jitter: uniform in [0, min(cap, base * 2^(attempt-1))].
  std::chrono::milliseconds backoff(int attempt) {
    const auto shift = std::min(attempt - 1, 30);
    const std::int64_t ceiling =
        std::min<std::int64_t>(retry_.backoff_cap.count(), retry_.backoff_base.count() << shift);
    if (ceiling <= 0) return std::chrono::milliseconds(0);
    std::lock_guard lock(jitter_mutex_);
    return std::chrono::milliseconds(detail::uniform_int(jitter_, 0, ceiling));
  }

  Backend& backend() { return *backend_; }
  std::string identifier() const { return backend_->identifier(); }
  int parallelism() const { return limiter_.limit(); }
  const RetryPolicy& retry_policy() const { return retry_; }
  std::uint64_t request_attempts() const { return attempts_.load(); }
  std::uint64_t completed_calls() const { return calls_.load(); }
  std::uint64_t failed_calls() const { return failures_.load(); }

 private:
  std::shared_ptr<Backend> backend_;
  RetryPolicy retry_;
  FairLimiter limiter_;
  std::shared_ptr<RequestLog> log_;
  Sleeper sleeper_;
  std::mutex jitter_mutex_;
  std::mt19937_64 jitter_;
  std::atomic<std::uint64_t> attempts_{0};
  std::atomic<std::uint64_t> calls_{0};
  std::atomic<std::uint64_t> failures_{0};
};

struct ReplayResult {
  std::size_t records = 0;
  std::size_t mismatches = 0;
};

// Re-issues every successful logged request against `backend` and counts
// responses that differ from the logged ones.
inline ReplayResult replay_request_log(const std::filesystem::path& path, Backend& backend) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read request log " + path.string());
  ReplayResult result;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    if (!rec.contains("response")) continue;
    ++result.records;
    const auto request = request_from_json(rec.at("request"));
    if (strip_trailing_whitespace(backend.complete(request)) != rec["response"].get<std::string>())
      ++result.mismatches;
  }
  return result;
}

}  // namespace big5
