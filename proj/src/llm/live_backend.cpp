#include <cstdlib>
#include <regex>
#include <thread>

#include "httplib.h"
#include "incode/llm/gateway.h"

namespace incode::llm {

struct LiveBackend::Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

LiveConfig LiveConfig::from_env() {
  LiveConfig c;
  auto env = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    return v ? v : "";
  };
  c.url = env("GATEWAY_URL");
  c.api_key = env("GATEWAY_KEY");
  if (const auto m = env("GATEWAY_MODEL"); !m.empty()) c.model = m;
  if (const auto m = env("GATEWAY_EMBEDDING_MODEL"); !m.empty()) c.embedding_model = m;
  return c;
}

LiveBackend::LiveBackend(LiveConfig config)
    : config_(std::move(config)), bucket_(config_.requests_per_minute, 1.0) {
  if (config_.url.empty()) throw ConfigError("live backend: GATEWAY_URL is not set");
  if (config_.api_key.empty()) throw ConfigError("live backend: GATEWAY_KEY is not set");
  static const std::regex kUrl(R"(^(https?)://([^/:]+)(:\d+)?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, kUrl)) {
    throw ConfigError("live backend: malformed GATEWAY_URL '" + config_.url + "'");
  }
  endpoint_ = std::make_unique<Endpoint>();
  endpoint_->scheme_host_port = m[1].str() + "://" + m[2].str() + m[3].str();
  endpoint_->path_prefix = m[4].str();
  while (!endpoint_->path_prefix.empty() && endpoint_->path_prefix.back() == '/') {
    endpoint_->path_prefix.pop_back();
  }
}

LiveBackend::~LiveBackend() = default;

std::size_t LiveBackend::attempts() const {
  std::lock_guard lock(stats_mutex_);
  return attempts_;
}

json LiveBackend::post(const std::string& path, const json& body) {
  const auto payload = body.dump();
  auto backoff = config_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, config_.max_backoff);
    }
    bucket_.acquire();
    {
      std::lock_guard lock(stats_mutex_);
      ++attempts_;
    }
    httplib::Client client(endpoint_->scheme_host_port);
    client.set_bearer_token_auth(config_.api_key);
    client.set_connection_timeout(std::chrono::seconds{10});
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    const auto res = client.Post(endpoint_->path_prefix + path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw TransportError(std::string("malformed response body: ") + e.what());
    }
  }
  throw TransportError("gave up after " + std::to_string(config_.max_retries + 1) +
                       " attempts (" + last_error + ")");
}

std::string LiveBackend::respond(const ChatRequest& request) {
  json body{{"model", config_.model},
            {"temperature", request.sampling.temperature},
            {"messages",
             {{{"role", "system"}, {"content", request.system}},
              {{"role", "user"}, {"content", request.user}}}}};
  if (request.sampling.seed) body["seed"] = *request.sampling.seed;
  const auto res = post("/chat/completions", body);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw TransportError("completion response has no message content: " + res.dump());
  }
}

std::vector<std::vector<double>> LiveBackend::embed(const std::vector<std::string>& texts) {
  const auto res = post("/embeddings", {{"model", config_.embedding_model}, {"input", texts}});
  std::vector<std::vector<double>> out(texts.size());
  try {
    for (const auto& item : res.at("data")) {
      const auto index = item.at("index").get<std::size_t>();
      if (index >= out.size()) throw TransportError("embedding index out of range");
      out[index] = item.at("embedding").get<std::vector<double>>();
    }
  } catch (const json::exception&) {
    throw TransportError("malformed embedding response");
  }
  for (const auto& row : out) {
    if (row.empty()) throw TransportError("embedding response is missing rows");
  }
  return out;
}

}  // namespace incode::llm
