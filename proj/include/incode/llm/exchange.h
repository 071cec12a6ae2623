#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "incode/common/json_io.h"

namespace incode::llm {

struct SamplingParams {
  double temperature = 0.0;
  std::optional<std::uint64_t> seed;

  bool operator==(const SamplingParams&) const = default;
};

struct ChatRequest {
  std::string template_name;
  std::string system;
  std::string user;
  SamplingParams sampling;
};

// One recorded model interaction.
struct ChatExchange {
  std::string template_name;
  std::string system;
  std::string user;
  std::string backend_id;
  SamplingParams sampling;
  std::string response;
  std::string fixture_key;

  bool operator==(const ChatExchange&) const = default;
};

// Content hash of the request fields that determine a response.
std::string make_fixture_key(const std::string& system, const std::string& user,
                             const std::string& backend_id, const SamplingParams& sampling);

json to_json(const SamplingParams& sampling);
SamplingParams sampling_from_json(const json& j);
json to_json(const ChatExchange& exchange);
ChatExchange exchange_from_json(const json& j);

// Append-only, internally synchronized record of every completion.
class TranscriptLog {
 public:
  TranscriptLog() = default;
  // Also appends each exchange as one JSON line to `path`.
  explicit TranscriptLog(std::filesystem::path path);

  void append(const ChatExchange& exchange);
  std::vector<ChatExchange> entries() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<ChatExchange> entries_;
  std::optional<std::filesystem::path> path_;
};

// One file per fixture key holding the request fields and the verbatim response.
class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return directory_; }
  void save(const ChatExchange& exchange) const;
  std::optional<ChatExchange> load(const std::string& fixture_key) const;

 private:
  std::filesystem::path directory_;
};

}  // namespace incode::llm
