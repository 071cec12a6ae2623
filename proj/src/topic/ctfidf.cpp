#include "incode/topic/ctfidf.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "incode/common/text.h"

namespace incode::topic {

ClassTermWeights ctfidf_weights(const std::vector<std::string>& cluster_texts) {
  std::vector<std::vector<std::string>> tokens;
  std::map<std::string, Eigen::Index> index;
  for (const auto& t : cluster_texts) {
    tokens.push_back(text::tokenize(t));
    for (const auto& tok : tokens.back()) index.emplace(tok, 0);
  }
  ClassTermWeights out;
  for (auto& [term, idx] : index) {
    idx = static_cast<Eigen::Index>(out.terms.size());
    out.terms.push_back(term);
  }
  const auto n_terms = static_cast<Eigen::Index>(out.terms.size());
  const auto n_clusters = static_cast<Eigen::Index>(cluster_texts.size());
  out.term_counts = Eigen::MatrixXd::Zero(n_terms, n_clusters);
  for (Eigen::Index c = 0; c < n_clusters; ++c) {
    for (const auto& tok : tokens[static_cast<std::size_t>(c)]) out.term_counts(index.at(tok), c) += 1.0;
  }
  if (n_terms == 0 || n_clusters == 0) {
    out.weights = out.term_counts;
    return out;
  }
  const double mean_tokens = out.term_counts.sum() / static_cast<double>(n_clusters);
  const Eigen::VectorXd idf =
      (1.0 + mean_tokens / out.term_counts.rowwise().sum().array()).log().matrix();
  out.weights = idf.asDiagonal() * out.term_counts;
  return out;
}

std::vector<TopicCluster> ctfidf_keywords(std::vector<TopicCluster> clusters,
                                          const corpus::Dataset& corpus, std::size_t top_k) {
  std::vector<std::string> texts;
  for (const auto& c : clusters) {
    std::vector<std::string> parts;
    for (const auto& id : c.members) parts.push_back(corpus.at(id).content);
    texts.push_back(text::join(parts, " "));
  }
  const auto w = ctfidf_weights(texts);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    std::vector<std::pair<std::string, double>> ranked;
    for (Eigen::Index t = 0; t < w.weights.rows(); ++t) {
      if (w.term_counts(t, col) > 0.0) ranked.emplace_back(w.terms[static_cast<std::size_t>(t)], w.weights(t, col));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    clusters[c].keywords = std::move(ranked);
  }
  return clusters;
}

}  // namespace incode::topic
