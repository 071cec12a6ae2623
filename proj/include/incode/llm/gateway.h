#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "incode/common/error.h"
#include "incode/llm/exchange.h"
#include "incode/llm/prompt_template.h"

namespace incode::llm {

class TransportError : public Error {
 public:
  using Error::Error;
};

class ReplayMissError : public Error {
 public:
  explicit ReplayMissError(const std::string& key)
      : Error("no recorded fixture for key " + key), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  // Identity used in fixture keys and exchange records.
  virtual std::string id() const = 0;
  virtual std::string respond(const ChatRequest& request) = 0;
};

// Deterministic, format-conforming responses derived from the run seed and
// the rendered prompts. Tags look like "t3a"; verb phrases like "verb3 phrase3a".
class MockBackend final : public Backend {
 public:
  explicit MockBackend(std::uint64_t seed) : seed_(seed) {}
  std::string id() const override { return "mock"; }
  std::string respond(const ChatRequest& request) override;

 private:
  std::uint64_t seed_;
};

// Looks responses up by fixture key. Keys are computed with the id of the
// backend that produced the recording.
class ReplayBackend final : public Backend {
 public:
  ReplayBackend(FixtureStore store, std::string recorded_backend_id);
  std::string id() const override { return recorded_backend_id_; }
  std::string respond(const ChatRequest& request) override;

 private:
  FixtureStore store_;
  std::string recorded_backend_id_;
};

class TokenBucket {
 public:
  TokenBucket(double requests_per_minute, double burst);
  void acquire();

 private:
  std::mutex mutex_;
  double rate_per_second_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
};

struct LiveConfig {
  std::string url;  // base URL of an OpenAI-compatible API, e.g. https://host/v1
  std::string api_key;
  std::string model = "gpt-4o";
  std::string embedding_model = "text-embedding-3-small";
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  double requests_per_minute = 60.0;
  std::chrono::seconds timeout{120};

  // GATEWAY_URL, GATEWAY_KEY, optional GATEWAY_MODEL / GATEWAY_EMBEDDING_MODEL.
  static LiveConfig from_env();
};

// Chat completions and embeddings over HTTP with retry and rate limiting.
class LiveBackend final : public Backend {
 public:
  // Throws ConfigError when the URL or key is missing; no network activity.
  explicit LiveBackend(LiveConfig config);
  ~LiveBackend() override;

  std::string id() const override { return "live:" + config_.model; }
  std::string respond(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts);

  // Number of HTTP attempts made so far, including retries.
  std::size_t attempts() const;

 private:
  json post(const std::string& path, const json& body);

  LiveConfig config_;
  struct Endpoint;
  std::unique_ptr<Endpoint> endpoint_;
  TokenBucket bucket_;
  mutable std::mutex stats_mutex_;
  std::size_t attempts_ = 0;
};

// Front door for all completions: stamps sampling defaults, computes the
// fixture key, records every exchange in the transcript and, when a recorder
// is configured, writes a replay fixture.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, SamplingParams defaults = {},
          std::shared_ptr<TranscriptLog> transcript = nullptr,
          std::optional<FixtureStore> recorder = std::nullopt);

  ChatExchange complete(const ChatRequest& request);
  ChatExchange complete(std::string_view template_name, const RenderedPrompt& prompt);

  const SamplingParams& sampling() const noexcept { return defaults_; }
  std::string backend_id() const { return backend_->id(); }
  const TranscriptLog& transcript() const noexcept { return *transcript_; }
  std::shared_ptr<Backend> backend() const { return backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  SamplingParams defaults_;
  std::shared_ptr<TranscriptLog> transcript_;
  std::optional<FixtureStore> recorder_;
  std::mutex record_mutex_;
};

}  // namespace incode::llm
