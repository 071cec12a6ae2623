#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "incode/topic/embedding.h"

namespace incode::topic {

struct TopicCluster {
  std::vector<MessageId> members;
  // Ranked by weight (descending), ties by term (ascending).
  std::vector<std::pair<std::string, double>> keywords;
  std::string thought;
  std::string label;
  bool oversize_flag = false;
};

// Pairwise cosine distances 1 - cos(a, b), clamped to [0, 2]. A zero row is
// at distance 1 from every other row.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> cosine_distance_matrix(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix unit = x;
  for (Eigen::Index r = 0; r < unit.rows(); ++r) {
    const Scalar norm = unit.row(r).norm();
    if (norm > Scalar(0)) unit.row(r) /= norm;
  }
  Matrix d = (Matrix::Ones(x.rows(), x.rows()) - unit * unit.transpose())
                 .cwiseMax(Scalar(0))
                 .cwiseMin(Scalar(2));
  d.diagonal().setZero();
  return d;
}

// Average-linkage agglomeration over a precomputed distance matrix. Pairs
// merge while their linkage distance is strictly below `threshold`; the
// lowest (i, j) wins ties. Returns member row indices per cluster, each
// sorted, clusters ordered by their first member.
template <typename Derived>
std::vector<std::vector<Eigen::Index>> average_linkage(const Eigen::MatrixBase<Derived>& distances,
                                                       typename Derived::Scalar threshold) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = distances.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d = distances;
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(n));
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  for (Eigen::Index i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};

  for (;;) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    Eigen::Index bi = -1;
    Eigen::Index bj = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (active[static_cast<std::size_t>(j)] && d(i, j) < best) {
          best = d(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0 || !(best < threshold)) break;

    auto& a = members[static_cast<std::size_t>(bi)];
    auto& b = members[static_cast<std::size_t>(bj)];
    const auto na = static_cast<Scalar>(a.size());
    const auto nb = static_cast<Scalar>(b.size());
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == bi || k == bj || !active[static_cast<std::size_t>(k)]) continue;
      const Scalar merged = (na * d(bi, k) + nb * d(bj, k)) / (na + nb);
      d(bi, k) = merged;
      d(k, bi) = merged;
    }
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    b.clear();
    active[static_cast<std::size_t>(bj)] = false;
  }

  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (active[static_cast<std::size_t>(i)]) out.push_back(std::move(members[static_cast<std::size_t>(i)]));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.front() < r.front(); });
  return out;
}

struct ClusterOptions {
  double distance_threshold = 0.945;  // in (0, 2)
  double oversize_ratio = 0.25;
};

// Unlabeled clusters partitioning the embedded messages. A cluster is
// flagged oversize when |members| / |rows| > oversize_ratio.
std::vector<TopicCluster> cluster(const EmbeddingMatrix& embeddings, const ClusterOptions& options);

}  // namespace incode::topic
