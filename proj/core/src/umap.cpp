#include "weaver/umap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace weaver {

namespace {

// splitmix64: tiny seeded generator so layouts are reproducible
// byte-for-byte regardless of platform or standard library.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

double clip4(double x) { return std::clamp(x, -4.0, 4.0); }

constexpr double kSigmaTolerance = 1e-5;
constexpr int kSigmaMaxIter = 64;
constexpr int kNegativeSamples = 5;

}  // namespace

NeighborGraph knn_graph(const std::vector<EmbeddingVector>& vectors, int k,
                        Metric metric) {
  const int n = static_cast<int>(vectors.size());
  if (k < 1) throw std::invalid_argument("knn_graph: k must be >= 1");
  if (k >= n) {
    throw std::invalid_argument("knn_graph: k (" + std::to_string(k) +
                                ") must be below the point count (" +
                                std::to_string(n) + ")");
  }

  NeighborGraph g;
  g.k = k;
  g.indices.resize(n);
  g.distances.resize(n);

  std::vector<std::pair<double, int>> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    row.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      row.emplace_back(metric_distance(metric, vectors[i], vectors[j]), j);
    }
    // pair ordering gives the tie-break on lower index for free
    std::partial_sort(row.begin(), row.begin() + k, row.end());
    g.indices[i].reserve(k);
    g.distances[i].reserve(k);
    for (int m = 0; m < k; ++m) {
      g.distances[i].push_back(row[m].first);
      g.indices[i].push_back(row[m].second);
    }
  }
  return g;
}

NeighborGraph fuzzy_weights(NeighborGraph g) {
  const int n = static_cast<int>(g.size());
  const int k = g.k;

  bool any_positive = false;
  for (const auto& row : g.distances) {
    for (double d : row) {
      if (d > 0.0) any_positive = true;
    }
  }
  if (!any_positive) {
    throw std::invalid_argument(
        "fuzzy_weights: all pairwise distances are zero (duplicate points?)");
  }

  const double target = std::log2(static_cast<double>(k));

  // Directed memberships.
  std::vector<std::vector<double>> directed(n);
  g.rhos.assign(n, 0.0);
  g.sigmas.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& dist = g.distances[i];
    const double rho = dist[0];

    auto membership_sum = [&](double sigma) {
      double s = 0.0;
      for (double d : dist) {
        s += std::exp(-std::max(0.0, d - rho) / sigma);
      }
      return s;
    };

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = 1.0;
    for (int iter = 0; iter < kSigmaMaxIter; ++iter) {
      const double sum = membership_sum(sigma);
      if (std::fabs(sum - target) < kSigmaTolerance) break;
      if (sum > target) {
        hi = sigma;
        sigma = (lo + hi) / 2.0;
      } else {
        lo = sigma;
        sigma = std::isinf(hi) ? sigma * 2.0 : (lo + hi) / 2.0;
      }
      if (sigma <= 0.0) sigma = std::numeric_limits<double>::min();
    }

    g.rhos[i] = rho;
    g.sigmas[i] = sigma;
    directed[i].reserve(k);
    for (double d : dist) {
      directed[i].push_back(std::exp(-std::max(0.0, d - rho) / sigma));
    }
  }

  // w = w_ij + w_ji - w_ij * w_ji, missing direction counted as 0.
  std::map<std::pair<int, int>, double> sym;
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < k; ++m) {
      const int j = g.indices[i][m];
      const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
      const double w = directed[i][m];
      auto [it, fresh] = sym.emplace(key, w);
      if (!fresh) it->second = it->second + w - it->second * w;
    }
  }

  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    g.weights[i].reserve(k);
    for (int m = 0; m < k; ++m) {
      const int j = g.indices[i][m];
      g.weights[i].push_back(
          sym.at({std::min(i, j), std::max(i, j)}));
    }
  }
  return g;
}

std::pair<double, double> fit_curve_params(double min_dist) {
  // Sample the target curve on (0, 3]; x = 0 carries no information
  // since both curves equal 1 there.
  constexpr int kGrid = 300;
  constexpr double kSpan = 3.0;
  std::vector<double> x(kGrid), y(kGrid);
  for (int g = 0; g < kGrid; ++g) {
    x[g] = (g + 1) * (kSpan / kGrid);
    y[g] = x[g] <= min_dist ? 1.0 : std::exp(-(x[g] - min_dist));
  }

  auto model = [](double xi, double a, double b) {
    return 1.0 / (1.0 + a * std::pow(xi, 2.0 * b));
  };
  auto loss = [&](double a, double b) {
    double ss = 0.0;
    for (int g = 0; g < kGrid; ++g) {
      const double r = y[g] - model(x[g], a, b);
      ss += r * r;
    }
    return ss;
  };

  // Damped Gauss-Newton on the residuals.
  double a = 1.0, b = 1.0;
  double lambda = 1e-3;
  double current = loss(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double jta = 0.0, jtb = 0.0, jaa = 0.0, jab = 0.0, jbb = 0.0;
    for (int g = 0; g < kGrid; ++g) {
      const double xpow = std::pow(x[g], 2.0 * b);
      const double f = 1.0 / (1.0 + a * xpow);
      const double r = y[g] - f;
      const double dfda = -xpow * f * f;
      const double dfdb = -2.0 * a * xpow * std::log(x[g]) * f * f;
      jta += dfda * r;
      jtb += dfdb * r;
      jaa += dfda * dfda;
      jab += dfda * dfdb;
      jbb += dfdb * dfdb;
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double daa = jaa + lambda * jaa;
      const double dbb = jbb + lambda * jbb;
      const double det = daa * dbb - jab * jab;
      if (det == 0.0) break;
      const double step_a = (dbb * jta - jab * jtb) / det;
      const double step_b = (daa * jtb - jab * jta) / det;
      const double na = std::max(a + step_a, 1e-8);
      const double nb = std::max(b + step_b, 1e-8);
      const double next = loss(na, nb);
      if (next < current) {
        if (std::fabs(na - a) < 1e-12 && std::fabs(nb - b) < 1e-12) {
          return {na, nb};
        }
        a = na;
        b = nb;
        current = next;
        lambda = std::max(lambda / 4.0, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 8.0;
    }
    if (!stepped) break;
  }
  return {a, b};
}

LowDimLayout optimize_layout(const NeighborGraph& g, int n_components,
                             double min_dist, int n_epochs,
                             std::uint64_t seed) {
  if (n_epochs <= 0) {
    throw std::invalid_argument("optimize_layout: n_epochs must be > 0");
  }
  if (n_components < 1) {
    throw std::invalid_argument("optimize_layout: n_components must be >= 1");
  }
  if (!g.has_weights()) {
    throw std::invalid_argument("optimize_layout: fuzzy weights not set");
  }

  const int n = static_cast<int>(g.size());
  const auto [a, b] = fit_curve_params(min_dist);

  LowDimLayout layout;
  layout.n_components = n_components;
  layout.min_dist = min_dist;
  layout.n_epochs = n_epochs;
  layout.seed = seed;
  layout.a = a;
  layout.b = b;

  SplitMix64 rng(seed);
  layout.coords.resize(n);
  for (int i = 0; i < n; ++i) {
    layout.coords[i].resize(n_components);
    for (int d = 0; d < n_components; ++d) {
      layout.coords[i][d] = -10.0 + 20.0 * rng.uniform();
    }
  }

  // Directed edge list in deterministic (head, tail) order; each
  // undirected pair appears once per direction, mirroring the reference
  // sampling schedule. Zero-weight entries are non-edges.
  struct Edge {
    int head;
    int tail;
    double weight;
  };
  std::vector<Edge> edges;
  double w_max = 0.0;
  for (int i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < g.indices[i].size(); ++m) {
      const double w = g.weights[i][m];
      if (w > 0.0) {
        edges.push_back({i, g.indices[i][m], w});
        w_max = std::max(w_max, w);
      }
    }
  }

  // An edge of weight w is applied roughly every w_max/w epochs, i.e.
  // sampled proportionally to its weight across the run.
  std::vector<double> epochs_per_sample(edges.size());
  std::vector<double> next_due(edges.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    epochs_per_sample[e] = w_max / edges[e].weight;
  }

  auto attract = [&](int i, int j, double alpha) {
    auto& yi = layout.coords[i];
    auto& yj = layout.coords[j];
    double d2 = 0.0;
    for (int d = 0; d < n_components; ++d) {
      const double diff = yi[d] - yj[d];
      d2 += diff * diff;
    }
    if (d2 <= 0.0) return;
    const double coeff =
        (-2.0 * a * b * std::pow(d2, b - 1.0)) / (1.0 + a * std::pow(d2, b));
    for (int d = 0; d < n_components; ++d) {
      const double grad = clip4(coeff * (yi[d] - yj[d]));
      yi[d] += alpha * grad;
      yj[d] -= alpha * grad;
    }
  };

  auto repulse = [&](int i, int j, double alpha) {
    auto& yi = layout.coords[i];
    const auto& yj = layout.coords[j];
    double d2 = 0.0;
    for (int d = 0; d < n_components; ++d) {
      const double diff = yi[d] - yj[d];
      d2 += diff * diff;
    }
    if (d2 > 0.0) {
      const double coeff =
          (2.0 * b) / ((0.001 + d2) * (1.0 + a * std::pow(d2, b)));
      for (int d = 0; d < n_components; ++d) {
        yi[d] += alpha * clip4(coeff * (yi[d] - yj[d]));
      }
    } else {
      // Coincident with a non-neighbor: push by the clip bound to unstick.
      for (int d = 0; d < n_components; ++d) {
        yi[d] += alpha * 4.0;
      }
    }
  };

  for (int epoch = 0; epoch < n_epochs; ++epoch) {
    const double alpha = 1.0 - static_cast<double>(epoch) / n_epochs;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (next_due[e] > epoch) continue;
      const Edge& edge = edges[e];
      attract(edge.head, edge.tail, alpha);
      for (int t = 0; t < kNegativeSamples; ++t) {
        const int other = static_cast<int>(rng.below(n));
        if (other == edge.head || other == edge.tail) continue;
        repulse(edge.head, other, alpha);
      }
      next_due[e] += epochs_per_sample[e];
    }
  }
  return layout;
}

LowDimLayout reduce(const std::vector<EmbeddingVector>& vectors,
                    const UmapParams& params) {
  NeighborGraph g = fuzzy_weights(knn_graph(vectors, params.k, params.metric));
  return optimize_layout(g, params.n_components, params.min_dist,
                         params.n_epochs, params.seed);
}

}  // namespace weaver
