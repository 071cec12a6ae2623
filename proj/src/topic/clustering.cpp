#include "incode/topic/clustering.h"

#include <stdexcept>

namespace incode::topic {

std::vector<TopicCluster> cluster(const EmbeddingMatrix& embeddings, const ClusterOptions& options) {
  if (embeddings.rows.rows() == 0) throw std::invalid_argument("cluster: no rows");
  if (!(options.distance_threshold > 0.0 && options.distance_threshold < 2.0)) {
    throw ConfigError("distance threshold must lie in (0, 2)");
  }
  const auto groups = average_linkage(cosine_distance_matrix(embeddings.rows),
                                      options.distance_threshold);
  const double total = static_cast<double>(embeddings.rows.rows());
  std::vector<TopicCluster> out;
  for (const auto& group : groups) {
    TopicCluster c;
    for (const auto row : group) c.members.push_back(embeddings.ids[static_cast<std::size_t>(row)]);
    c.oversize_flag = static_cast<double>(group.size()) / total > options.oversize_ratio;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace incode::topic
