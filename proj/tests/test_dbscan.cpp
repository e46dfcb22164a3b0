#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "weaver/dbscan.hpp"

using namespace weaver;

namespace {

std::vector<EmbeddingVector> points_1d(std::initializer_list<double> xs) {
    std::vector<EmbeddingVector> out;
    for (double x : xs) out.push_back({x});
    return out;
}

std::vector<EmbeddingVector> random_points(std::mt19937_64& rng, int n, int dim) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<EmbeddingVector> out(n, EmbeddingVector(dim));
    for (auto& p : out)
        for (auto& x : p) x = unit(rng);
    return out;
}

}  // namespace

TEST_CASE("identical points form a single cluster") {
    auto asg = dbscan(std::vector<EmbeddingVector>(5, {1.0, 2.0}), 0.5, 3);
    CHECK(asg.num_clusters == 1);
    CHECK(asg.noise_count() == 0);
    for (int label : asg.labels) CHECK(label == 0);
}

TEST_CASE("isolated points are all noise") {
    auto asg = dbscan(points_1d({0, 10, 20}), 1.0, 2);
    CHECK(asg.num_clusters == 0);
    CHECK(asg.noise_count() == 3);
    for (int label : asg.labels) CHECK(label == kNoise);
}

TEST_CASE("two chained groups split at the density gap") {
    auto asg = dbscan(points_1d({0, 0.5, 1.0, 9.0, 9.4, 9.8}), 0.6, 2);
    CHECK(asg.num_clusters == 2);
    CHECK(asg.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("neighborhood counts include the point itself") {
    // Pair at distance 0.4: with min_pts=2 each point has {self, other}.
    auto pair = dbscan(points_1d({0, 0.4}), 0.5, 2);
    CHECK(pair.num_clusters == 1);
    // min_pts=3 needs a third point inside eps.
    auto sparse = dbscan(points_1d({0, 0.4}), 0.5, 3);
    CHECK(sparse.num_clusters == 0);
}

TEST_CASE("border points join the first discovered cluster") {
    // 0.8 is non-core (3 < min_pts in range) but reachable from the core at
    // 0.3 and the core at 1.3; index order hands it to the left cluster.
    auto asg = dbscan(points_1d({0, 0.1, 0.2, 0.3, 0.8, 1.3, 1.4, 1.5, 1.6}), 0.5, 4);
    REQUIRE(asg.num_clusters == 2);
    CHECK(asg.noise_count() == 0);
    CHECK(asg.labels[4] == asg.labels[0]);
    CHECK(asg.labels[5] != asg.labels[0]);
}

TEST_CASE("empty input yields an empty assignment") {
    auto asg = dbscan({}, 0.5, 3);
    CHECK(asg.labels.empty());
    CHECK(asg.num_clusters == 0);
}

TEST_CASE("parameters are validated") {
    CHECK_THROWS_AS(dbscan(points_1d({0}), 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(dbscan(points_1d({0}), -1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(dbscan(points_1d({0}), 0.5, 0), std::invalid_argument);
}

TEST_CASE("cluster ids are contiguous and members_of matches labels") {
    std::mt19937_64 rng(31);
    auto points = random_points(rng, 60, 2);
    auto asg = dbscan(points, 0.15, 3);
    std::set<int> seen(asg.labels.begin(), asg.labels.end());
    seen.erase(kNoise);
    CHECK(static_cast<int>(seen.size()) == asg.num_clusters);
    for (int c = 0; c < asg.num_clusters; ++c) {
        CHECK(seen.count(c) == 1);
        for (int i : asg.members_of(c)) CHECK(asg.labels[i] == c);
        CHECK(!asg.members_of(c).empty());
    }
    CHECK(asg.noise_count() ==
          static_cast<int>(std::count(asg.labels.begin(), asg.labels.end(), kNoise)));
}

TEST_CASE("cosine metric clusters by direction not magnitude") {
    std::vector<EmbeddingVector> points = {
        {1, 0}, {10, 0}, {0.99, 0.01}, {0, 1}, {0, 5}, {0.01, 0.99},
    };
    auto asg = dbscan(points, 0.05, 3, Metric::COSINE);
    CHECK(asg.num_clusters == 2);
    CHECK(asg.labels[0] == asg.labels[1]);
    CHECK(asg.labels[0] == asg.labels[2]);
    CHECK(asg.labels[3] == asg.labels[4]);
    CHECK(asg.labels[0] != asg.labels[3]);
}

TEST_CASE("random instances match the reachability-closure reference") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_dist(5, 80);
    std::uniform_int_distribution<int> dim_dist(1, 4);
    std::uniform_real_distribution<double> eps_dist(0.05, 0.6);
    std::uniform_int_distribution<int> pts_dist(1, 6);
    for (int trial = 0; trial < 15; ++trial) {
        int n = n_dist(rng);
        auto points = random_points(rng, n, dim_dist(rng));
        double eps = eps_dist(rng);
        int min_pts = pts_dist(rng);
        auto fast = dbscan(points, eps, min_pts);
        auto slow = support::naive_dbscan(points, eps, min_pts);
        CHECK(fast.num_clusters == slow.num_clusters);
        CHECK(support::same_partition(fast.labels, slow.labels));
    }
}

TEST_CASE("core co-membership is permutation invariant") {
    std::mt19937_64 rng(77);
    auto points = random_points(rng, 50, 2);
    const double eps = 0.2;
    const int min_pts = 3;
    auto direct = dbscan(points, eps, min_pts);

    std::vector<int> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<EmbeddingVector> shuffled;
    for (int i : order) shuffled.push_back(points[i]);
    auto permuted = dbscan(shuffled, eps, min_pts);

    std::vector<bool> core(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int within = 0;
        for (const auto& q : points)
            if (euclidean_distance(points[i], q) <= eps) ++within;
        core[i] = within >= min_pts;
    }
    // Map each original index to its slot in the shuffled run.
    std::vector<int> slot(points.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) slot[order[pos]] = static_cast<int>(pos);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!core[i]) continue;
        CHECK(permuted.labels[slot[i]] != kNoise);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (!core[j]) continue;
            CHECK((direct.labels[i] == direct.labels[j]) ==
                  (permuted.labels[slot[i]] == permuted.labels[slot[j]]));
        }
    }
}

TEST_CASE("noise shrinks as eps grows") {
    std::mt19937_64 rng(99);
    auto points = random_points(rng, 70, 2);
    auto narrow = dbscan(points, 0.08, 3);
    auto wide = dbscan(points, 0.2, 3);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (wide.labels[i] == kNoise) CHECK(narrow.labels[i] == kNoise);
    CHECK(narrow.noise_count() >= wide.noise_count());
}
