#include "weaver/dbscan.hpp"

#include <deque>
#include <stdexcept>

namespace weaver {

std::vector<int> ClusterAssignment::members_of(int cluster) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.push_back(static_cast<int>(i));
  }
  return out;
}

int ClusterAssignment::noise_count() const {
  int n = 0;
  for (int l : labels) {
    if (l == kNoise) ++n;
  }
  return n;
}

ClusterAssignment dbscan(const std::vector<EmbeddingVector>& points,
                         double eps, int min_pts, Metric metric) {
  if (eps <= 0.0) throw std::invalid_argument("dbscan: eps must be > 0");
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");

  const std::size_t n = points.size();
  ClusterAssignment result;
  result.params = {eps, min_pts, metric};
  result.labels.assign(n, kNoise);
  if (n == 0) return result;

  // Corpus-scale inputs (hundreds of phrases): the O(n^2) neighborhood
  // table is cheaper than any index structure would be.
  std::vector<std::vector<int>> neighborhood(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (metric_distance(metric, points[i], points[j]) <= eps) {
        neighborhood[i].push_back(static_cast<int>(j));
      }
    }
  }
  auto is_core = [&](int i) {
    return static_cast<int>(neighborhood[i].size()) >= min_pts;
  };

  constexpr int kUnvisited = -2;
  std::vector<int> label(n, kUnvisited);
  int next_cluster = 0;

  for (int seed = 0; seed < static_cast<int>(n); ++seed) {
    if (label[seed] != kUnvisited) continue;
    if (!is_core(seed)) {
      label[seed] = kNoise;
      continue;
    }
    const int cluster = next_cluster++;
    label[seed] = cluster;
    std::deque<int> frontier(neighborhood[seed].begin(),
                             neighborhood[seed].end());
    while (!frontier.empty()) {
      const int q = frontier.front();
      frontier.pop_front();
      if (label[q] == kNoise) {
        label[q] = cluster;  // border point reclaimed from an earlier pass
        continue;            // non-core by construction, do not expand
      }
      if (label[q] != kUnvisited) continue;
      label[q] = cluster;
      if (is_core(q)) {
        for (int r : neighborhood[q]) {
          if (label[r] == kUnvisited || label[r] == kNoise) {
            frontier.push_back(r);
          }
        }
      }
    }
  }

  result.labels = std::move(label);
  result.num_clusters = next_cluster;
  return result;
}

}  // namespace weaver
