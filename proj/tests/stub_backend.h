#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "incode/llm/gateway.h"

namespace incode::testing {

// Returns canned responses in order, repeating the last one.
class StubBackend final : public llm::Backend {
 public:
  explicit StubBackend(std::vector<std::string> responses) : responses_(std::move(responses)) {}
  std::string id() const override { return "stub"; }
  std::string respond(const llm::ChatRequest& request) override {
    std::lock_guard lock(mutex_);
    requests.push_back(request);
    const auto i = std::min(next_++, responses_.size() - 1);
    return responses_[i];
  }

  std::vector<llm::ChatRequest> requests;

 private:
  std::mutex mutex_;
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

}  // namespace incode::testing
