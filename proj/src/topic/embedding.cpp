#include "incode/topic/embedding.h"

#include <map>
#include <stdexcept>

#include "incode/common/text.h"
#include "incode/llm/gateway.h"

namespace incode::topic {

Eigen::MatrixXd TfidfEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<std::map<std::string, double>> counts(texts.size());
  std::map<std::string, double> df;
  bool any_empty = false;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (auto& tok : text::tokenize(texts[i])) counts[i][tok] += 1.0;
    for (const auto& [term, _] : counts[i]) df[term] += 1.0;
    any_empty = any_empty || counts[i].empty();
  }

  vocabulary_.clear();
  std::map<std::string, Eigen::Index> column;
  for (const auto& [term, _] : df) {
    column.emplace(term, static_cast<Eigen::Index>(vocabulary_.size()));
    vocabulary_.push_back(term);
  }
  const auto empty_column = static_cast<Eigen::Index>(vocabulary_.size());
  if (any_empty) vocabulary_.emplace_back("<empty>");

  const double n = static_cast<double>(texts.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(texts.size()),
                                              static_cast<Eigen::Index>(vocabulary_.size()));
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (counts[i].empty()) {
      out(row, empty_column) = 1.0;
      continue;
    }
    for (const auto& [term, tf] : counts[i]) {
      out(row, column.at(term)) = tf * (std::log((1.0 + n) / (1.0 + df.at(term))) + 1.0);
    }
    out.row(row).normalize();
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(std::shared_ptr<llm::LiveBackend> backend)
    : backend_(std::move(backend)) {
  if (!backend_) throw ConfigError("remote embedder needs a live backend");
}

std::string RemoteEmbedder::name() const { return "remote:" + backend_->id(); }

Eigen::MatrixXd RemoteEmbedder::embed(const std::vector<std::string>& texts) {
  const auto rows = backend_->embed(texts);
  const auto dim = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw Error("embedding rows have different dimensions");
    out.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(), static_cast<Eigen::Index>(dim));
  }
  return out;
}

EmbeddingMatrix embed(const std::vector<corpus::Message>& messages, Embedder& embedder) {
  if (messages.empty()) throw std::invalid_argument("embed: no messages");
  std::vector<std::string> texts;
  EmbeddingMatrix out;
  for (const auto& m : messages) {
    texts.push_back(m.content);
    out.ids.push_back(m.id);
  }
  out.rows = embedder.embed(texts);
  out.source = embedder.name();
  if (out.rows.rows() != static_cast<Eigen::Index>(messages.size())) {
    throw Error("embedder returned " + std::to_string(out.rows.rows()) + " rows for " +
                std::to_string(messages.size()) + " messages");
  }
  if (!out.rows.allFinite()) throw Error("embedder returned non-finite values");
  return out;
}

}  // namespace incode::topic
