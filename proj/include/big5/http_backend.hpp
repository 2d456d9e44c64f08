#pragma once

// Chat-completions over HTTP(S): POST {model, messages, temperature, top_p,
// max_tokens}; reply text is choices[0].message.content.

#include <cstdlib>
#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "big5/gateway.hpp"
#include "big5/scripted.hpp"

namespace big5 {

struct EndpointUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline EndpointUrl split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + url + "' lacks a scheme");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline nlohmann::json chat_request_body(const std::string& model, const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) messages.push_back(to_json(m));
  return {{"model", model},
          {"messages", messages},
          {"temperature", request.params.temperature},
          {"top_p", request.params.top_p},
          {"max_tokens", request.params.max_new_tokens}};
}

inline std::string chat_response_text(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProtocolError("choices[0].message.content is not a string");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed chat-completions response: ") + e.what());
  }
}

class HttpChatBackend : public Backend {
 public:
  explicit HttpChatBackend(const BackendSpec& spec) : spec_(spec) {
    if (spec_.endpoint.empty()) throw ConfigError("http_chat backend needs an endpoint");
    if (spec_.model.empty()) throw ConfigError("http_chat backend needs a model identifier");
    if (spec_.credential_env.empty()) throw ConfigError("http_chat backend needs credential_env");
    const char* key = std::getenv(spec_.credential_env.c_str());
    if (!key || !*key)
      throw ConfigError("credential environment variable " + spec_.credential_env + " is not set");
    api_key_ = key;
    url_ = split_endpoint(spec_.endpoint);
  }

  std::string identifier() const override { return "http:" + spec_.model + "@" + spec_.endpoint; }

  std::string complete(const ChatRequest& request) override {
    httplib::Client client(url_.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(spec_.timeout).count();
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    client.set_write_timeout(timeout, 0);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    const auto body = chat_request_body(spec_.model, request).dump();
    auto res = client.Post(url_.path, headers, body, "application/json");
    if (!res) throw TransportError("transport failure: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500)
      throw TransportError("HTTP " + std::to_string(res->status), true);
    if (res->status != 200)
      throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200), false);
    return chat_response_text(res->body);
  }

 private:
  BackendSpec spec_;
  std::string api_key_;
  EndpointUrl url_;
};

inline std::shared_ptr<Backend> make_backend(const BackendSpec& spec) {
  if (spec.kind == BackendKind::scripted) {
    if (spec.behavior.empty()) throw ConfigError("scripted backend needs a behavior profile");
    return std::make_shared<ScriptedBackend>(spec.behavior);
  }
  return std::make_shared<HttpChatBackend>(spec);
}

inline std::shared_ptr<Gateway> make_gateway(const BackendSpec& spec) {
  return std::make_shared<Gateway>(make_backend(spec), spec.retry, spec.parallelism);
}

}  // namespace big5
