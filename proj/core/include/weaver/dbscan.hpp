#pragma once

#include <vector>

#include "weaver/embeddings.hpp"

namespace weaver {

// Label for points that are neither core nor density-reachable from one.
inline constexpr int kNoise = -1;

struct DbscanParams {
  double eps = 0.30;
  int min_pts = 3;
  Metric metric = Metric::EUCLIDEAN;
};

struct ClusterAssignment {
  // labels[i] is a cluster id in [0, num_clusters) or kNoise.
  std::vector<int> labels;
  int num_clusters = 0;
  DbscanParams params;

  std::vector<int> members_of(int cluster) const;
  int noise_count() const;
};

// Classic DBSCAN over an explicit point set.
//
// A point is core iff its eps-neighborhood (including itself) holds at
// least min_pts points. Clusters are maximal density-connected sets and
// are numbered contiguously from 0 in order of discovery; expansion runs
// in deterministic index order, so border points join the first core
// cluster that reaches them. Empty input yields an empty assignment.
//
// Throws std::invalid_argument when eps <= 0 or min_pts < 1.
ClusterAssignment dbscan(const std::vector<EmbeddingVector>& points,
                         double eps, int min_pts,
                         Metric metric = Metric::EUCLIDEAN);

}  // namespace weaver
