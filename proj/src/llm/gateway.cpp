#include "incode/llm/gateway.h"

#include <thread>

namespace incode::llm {

ReplayBackend::ReplayBackend(FixtureStore store, std::string recorded_backend_id)
    : store_(std::move(store)), recorded_backend_id_(std::move(recorded_backend_id)) {}

std::string ReplayBackend::respond(const ChatRequest& request) {
  const auto key = make_fixture_key(request.system, request.user, recorded_backend_id_,
                                    request.sampling);
  const auto hit = store_.load(key);
  if (!hit) throw ReplayMissError(key);
  return hit->response;
}

TokenBucket::TokenBucket(double requests_per_minute, double burst)
    : rate_per_second_(requests_per_minute / 60.0),
      capacity_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
  if (rate_per_second_ <= 0.0) return;
  std::unique_lock lock(mutex_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    const std::chrono::duration<double> elapsed = now - last_;
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_per_second_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_per_second_);
    lock.unlock();
    std::this_thread::sleep_for(wait);
    lock.lock();
  }
}

Gateway::Gateway(std::shared_ptr<Backend> backend, SamplingParams defaults,
                 std::shared_ptr<TranscriptLog> transcript, std::optional<FixtureStore> recorder)
    : backend_(std::move(backend)),
      defaults_(defaults),
      transcript_(transcript ? std::move(transcript) : std::make_shared<TranscriptLog>()),
      recorder_(std::move(recorder)) {
  if (!backend_) throw ConfigError("gateway needs a backend");
}

ChatExchange Gateway::complete(const ChatRequest& request) {
  ChatExchange ex;
  ex.template_name = request.template_name;
  ex.system = request.system;
  ex.user = request.user;
  ex.backend_id = backend_->id();
  ex.sampling = request.sampling;
  ex.fixture_key = make_fixture_key(ex.system, ex.user, ex.backend_id, ex.sampling);
  ex.response = backend_->respond(request);
  transcript_->append(ex);
  if (recorder_) {
    std::lock_guard lock(record_mutex_);
    recorder_->save(ex);
  }
  return ex;
}

ChatExchange Gateway::complete(std::string_view template_name, const RenderedPrompt& prompt) {
  return complete(ChatRequest{std::string(template_name), prompt.system, prompt.user, defaults_});
}

}  // namespace incode::llm
