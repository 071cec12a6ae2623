#include "incode/llm/exchange.h"

#include <fstream>

#include "incode/common/digest.h"
#include "incode/common/error.h"

namespace incode::llm {

std::string make_fixture_key(const std::string& system, const std::string& user,
                             const std::string& backend_id, const SamplingParams& sampling) {
  const json doc{{"system", system},
                 {"user", user},
                 {"backend", backend_id},
                 {"sampling", to_json(sampling)}};
  return sha256_hex(doc.dump());
}

json to_json(const SamplingParams& sampling) {
  json j{{"temperature", sampling.temperature}};
  j["seed"] = sampling.seed ? json(*sampling.seed) : json(nullptr);
  return j;
}

SamplingParams sampling_from_json(const json& j) {
  SamplingParams s;
  s.temperature = j.value("temperature", 0.0);
  if (j.contains("seed") && !j["seed"].is_null()) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}

json to_json(const ChatExchange& e) {
  return {{"template", e.template_name}, {"system", e.system},       {"user", e.user},
          {"backend", e.backend_id},     {"sampling", to_json(e.sampling)},
          {"response", e.response},      {"fixture_key", e.fixture_key}};
}

ChatExchange exchange_from_json(const json& j) {
  ChatExchange e;
  e.template_name = j.value("template", "");
  e.system = j.at("system").get<std::string>();
  e.user = j.at("user").get<std::string>();
  e.backend_id = j.at("backend").get<std::string>();
  e.sampling = sampling_from_json(j.at("sampling"));
  e.response = j.at("response").get<std::string>();
  e.fixture_key = j.value("fixture_key", "");
  return e;
}

TranscriptLog::TranscriptLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
}

void TranscriptLog::append(const ChatExchange& exchange) {
  std::lock_guard lock(mutex_);
  entries_.push_back(exchange);
  if (path_) {
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot append to transcript " + path_->string());
    out << to_json(exchange).dump() << '\n';
  }
}

std::vector<ChatExchange> TranscriptLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::size_t TranscriptLog::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

FixtureStore::FixtureStore(std::filesystem::path directory) : directory_(std::move(directory)) {}

void FixtureStore::save(const ChatExchange& exchange) const {
  write_json_file(directory_ / (exchange.fixture_key + ".json"), to_json(exchange));
}

std::optional<ChatExchange> FixtureStore::load(const std::string& fixture_key) const {
  const auto path = directory_ / (fixture_key + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  return exchange_from_json(read_json_file(path));
}

}  // namespace incode::llm
