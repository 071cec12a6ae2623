#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "incode/corpus/dataset.h"
#include "incode/topic/clustering.h"

namespace incode::topic {

// Term x cluster weights: w(t, c) = tf(t, c) * log(1 + A / f(t)), where tf is
// the count of t in the cluster's concatenated text, f(t) its count over all
// clusters and A the mean token count per cluster.
struct ClassTermWeights {
  std::vector<std::string> terms;  // sorted
  Eigen::MatrixXd term_counts;     // terms x clusters
  Eigen::MatrixXd weights;         // terms x clusters
};

ClassTermWeights ctfidf_weights(const std::vector<std::string>& cluster_texts);

// Keeps the top_k weighted terms present in each cluster.
std::vector<TopicCluster> ctfidf_keywords(std::vector<TopicCluster> clusters,
                                          const corpus::Dataset& corpus, std::size_t top_k = 10);

}  // namespace incode::topic
