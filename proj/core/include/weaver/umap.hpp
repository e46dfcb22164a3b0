#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "weaver/embeddings.hpp"

namespace weaver {

// Exact k-NN graph with fuzzy simplicial weights.
//
// Rows are per-point neighbor lists sorted by non-decreasing distance,
// ties broken by lower index; a point is never its own neighbor. Weights
// are the symmetrized fuzzy memberships in (0, 1] and are only present
// after fuzzy_weights().
struct NeighborGraph {
  int k = 0;
  std::vector<std::vector<int>> indices;
  std::vector<std::vector<double>> distances;
  std::vector<std::vector<double>> weights;  // empty until fuzzy_weights()
  std::vector<double> rhos;    // per-point nearest-neighbor distance
  std::vector<double> sigmas;  // per-point smooth-kNN bandwidth

  std::size_t size() const { return indices.size(); }
  bool has_weights() const { return !weights.empty(); }
};

struct UmapParams {
  int k = 15;
  int n_components = 2;
  double min_dist = 0.1;
  int n_epochs = 200;
  std::uint64_t seed = 0;
  Metric metric = Metric::EUCLIDEAN;
};

struct LowDimLayout {
  // coords[i] has length n_components.
  std::vector<std::vector<double>> coords;
  int n_components = 2;
  double min_dist = 0.1;
  int n_epochs = 0;
  std::uint64_t seed = 0;
  // Fitted curve parameters: 1/(1 + a*d^(2b)) approximates the target
  // membership curve for the chosen min_dist.
  double a = 0.0;
  double b = 0.0;
};

// Exact brute-force k nearest neighbors. Throws std::invalid_argument
// when k < 1 or k >= point count.
NeighborGraph knn_graph(const std::vector<EmbeddingVector>& vectors, int k,
                        Metric metric);

// Per-point smooth-kNN calibration followed by probabilistic-union
// symmetrization:
//
//   rho_i    = distance to the nearest neighbor
//   sigma_i  : sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(k),
//              found by binary search (64 iterations or |sum - log2 k| < 1e-5)
//   w_ij     = exp(-max(0, d_ij - rho_i) / sigma_i)
//   w        = w_ij + w_ji - w_ij * w_ji
//
// Throws std::invalid_argument when every pairwise distance is zero.
NeighborGraph fuzzy_weights(NeighborGraph g);

// Least-squares fit of (a, b) such that 1/(1 + a*d^(2b)) approximates
// {1 for d <= min_dist, exp(-(d - min_dist)) otherwise}.
std::pair<double, double> fit_curve_params(double min_dist);

// Stochastic-gradient layout of the weighted neighbor graph.
//
// Coordinates start uniform in [-10, 10]^n_components from the seed; each
// epoch walks the edges in deterministic order, applying the attractive
// step to edges scheduled proportionally to their weight plus 5 negative
// repulsive samples per application. Learning rate decays linearly from
// 1.0 to 0. Identical inputs and seed give bit-identical layouts.
LowDimLayout optimize_layout(const NeighborGraph& g, int n_components,
                             double min_dist, int n_epochs,
                             std::uint64_t seed);

// knn_graph -> fuzzy_weights -> optimize_layout; errors propagate from
// each stage.
LowDimLayout reduce(const std::vector<EmbeddingVector>& vectors,
                    const UmapParams& params);

}  // namespace weaver
