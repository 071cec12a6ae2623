#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "incode/corpus/dataset.h"

namespace incode::llm {
class LiveBackend;
}

namespace incode::topic {

using corpus::MessageId;

// One row per embedded message, in dataset order.
struct EmbeddingMatrix {
  Eigen::MatrixXd rows;
  std::vector<MessageId> ids;
  std::string source;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual Eigen::MatrixXd embed(const std::vector<std::string>& texts) = 0;
};

// L2-normalized tf-idf over lowercase alphanumeric tokens, with smoothed idf
// ln((1 + n) / (1 + df)) + 1. Texts without any token get a unit vector on a
// dedicated "<empty>" coordinate.
class TfidfEmbedder final : public Embedder {
 public:
  std::string name() const override { return "tfidf-fallback"; }
  Eigen::MatrixXd embed(const std::vector<std::string>& texts) override;

  // Column vocabulary of the last embed() call.
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }

 private:
  std::vector<std::string> vocabulary_;
};

// Embeddings from the live endpoint of the gateway.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(std::shared_ptr<llm::LiveBackend> backend);
  std::string name() const override;
  Eigen::MatrixXd embed(const std::vector<std::string>& texts) override;

 private:
  std::shared_ptr<llm::LiveBackend> backend_;
};

// Throws std::invalid_argument for an empty message list and Error when the
// embedder returns ragged or non-finite rows.
EmbeddingMatrix embed(const std::vector<corpus::Message>& messages, Embedder& embedder);

}  // namespace incode::topic
