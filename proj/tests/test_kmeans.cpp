#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "arcminer/error.hpp"
#include "arcminer/kmeans.hpp"

using namespace arcminer;

namespace {

ArcSet random_arcs(std::mt19937_64& rng, Eigen::Index n, Eigen::Index len = 100) {
  std::normal_distribution<double> g;
  ArcSet s;
  s.values.resize(len, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    s.ids.push_back("a" + std::to_string(1000 + c));
    for (Eigen::Index r = 0; r < len; ++r) s.values(r, c) = g(rng);
  }
  return s;
}

ArcSet levels(std::mt19937_64& rng, int per_level) {
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  ArcSet s;
  s.values.resize(100, 3 * per_level);
  Eigen::Index c = 0;
  for (const double level : {-1.0, 0.0, 1.0})
    for (int i = 0; i < per_level; ++i, ++c) {
      s.ids.push_back("L" + std::to_string(static_cast<int>(level)) + "_" + std::to_string(i));
      for (Eigen::Index r = 0; r < 100; ++r) s.values(r, c) = level + jitter(rng);
    }
  return s;
}

} // namespace

TEST_CASE("k = 1 gives the pointwise mean") {
  std::mt19937_64 rng(1);
  const auto arcs = random_arcs(rng, 25);
  const auto m = kmeans_cluster(arcs, {.k = 1});
  CHECK((m.centroids.col(0) - arcs.values.rowwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("k = N has zero objective") {
  std::mt19937_64 rng(2);
  const auto arcs = random_arcs(rng, 7);
  const auto m = kmeans_cluster(arcs, {.k = 7});
  CHECK(m.within_cluster_objective == doctest::Approx(0.0).scale(1));
  for (const auto n : m.cluster_sizes()) CHECK(n == 1);
}

TEST_CASE("three constant levels are separated exactly") {
  std::mt19937_64 rng(3);
  const auto arcs = levels(rng, 20);
  const auto m = kmeans_cluster(arcs, {.k = 3});
  std::map<std::string, std::set<int>> by_level;
  for (const auto& [id, c] : m.assignments) by_level[id.substr(0, id.find('_'))].insert(c);
  CHECK(by_level.size() == 3);
  std::set<int> used;
  for (const auto& [level, clusters] : by_level) {
    CHECK(clusters.size() == 1);
    used.insert(*clusters.begin());
  }
  CHECK(used.size() == 3);
}

TEST_CASE("errors") {
  std::mt19937_64 rng(4);
  const auto arcs = random_arcs(rng, 3);
  CHECK_THROWS_AS(kmeans_cluster(arcs, {.k = 4}), Error);
  auto dup = arcs;
  dup.ids[1] = dup.ids[0];
  CHECK_THROWS_AS(kmeans_cluster(dup, {.k = 2}), std::invalid_argument);
  CHECK_THROWS(sweep_k(arcs, {1, 2}, {}));
}

TEST_CASE("objective never increases and the model is consistent") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto arcs = random_arcs(rng, 40, 30);
    const auto m = kmeans_cluster(arcs, {.k = 4, .seed = static_cast<std::uint64_t>(trial)});
    for (std::size_t i = 1; i < m.objective_history.size(); ++i)
      CHECK(m.objective_history[i] <= m.objective_history[i - 1] * (1 + 1e-12));
    CHECK(m.assignments.size() == 40);
    Eigen::Index total = 0;
    for (const auto n : m.cluster_sizes()) {
      CHECK(n > 0);
      total += n;
    }
    CHECK(total == 40);
    // centroids are member means
    for (Eigen::Index c = 0; c < m.k; ++c) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(30);
      int count = 0;
      for (Eigen::Index a = 0; a < arcs.size(); ++a)
        if (m.assignments.at(arcs.ids[static_cast<std::size_t>(a)]) == c) sum += arcs.values.col(a), ++count;
      CHECK((m.centroids.col(c) - sum / count).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("determinism and permutation invariance") {
  std::mt19937_64 rng(6);
  const auto arcs = random_arcs(rng, 50);
  const ClusterConfig cfg{.k = 5, .seed = 99};
  const auto a = kmeans_cluster(arcs, cfg), b = kmeans_cluster(arcs, cfg);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
  CHECK(a.within_cluster_objective == b.within_cluster_objective);

  ArcSet shuffled;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(arcs.size()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  shuffled.values.resize(arcs.values.rows(), arcs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.ids.push_back(arcs.ids[static_cast<std::size_t>(order[i])]);
    shuffled.values.col(static_cast<Eigen::Index>(i)) = arcs.values.col(order[i]);
  }
  const auto c = kmeans_cluster(shuffled, cfg);
  CHECK(c.within_cluster_objective == a.within_cluster_objective);
  CHECK(c.assignments == a.assignments);
}

TEST_CASE("k sweep") {
  std::mt19937_64 rng(7);
  const auto arcs = random_arcs(rng, 60);
  const auto rows = sweep_k(arcs, {12, 4, 8, 6, 10}, {});
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].k == static_cast<Eigen::Index>(4 + 2 * i));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].objective <= rows[i - 1].objective);

  const auto sep = levels(rng, 10);
  ArcSet two;
  two.values.resize(100, 20);
  for (Eigen::Index c = 0; c < 20; ++c) {
    two.ids.push_back(sep.ids[static_cast<std::size_t>(c < 10 ? c : c + 10)]);
    two.values.col(c) = sep.values.col(c < 10 ? c : c + 10);
  }
  const auto s = sweep_k(two, {2, 3}, {});
  CHECK(s[0].silhouette > s[1].silhouette);

  ArcSet same;
  same.values = Eigen::MatrixXd::Constant(100, 8, 0.3);
  for (int i = 0; i < 8; ++i) same.ids.push_back("s" + std::to_string(i));
  for (const auto& r : sweep_k(same, {2, 4}, {})) CHECK(r.objective == 0.0);
}

TEST_CASE("silhouette oracle") {
  std::mt19937_64 rng(8);
  const auto arcs = random_arcs(rng, 15, 20);
  const auto m = kmeans_cluster(arcs, {.k = 3});
  const auto w = simpson_weight_vector(20);
  double total = 0;
  for (Eigen::Index i = 0; i < arcs.size(); ++i) {
    const int ci = m.assignments.at(arcs.ids[static_cast<std::size_t>(i)]);
    std::map<int, std::pair<double, int>> acc;
    for (Eigen::Index j = 0; j < arcs.size(); ++j) {
      if (j == i) continue;
      auto& [s, n] = acc[m.assignments.at(arcs.ids[static_cast<std::size_t>(j)])];
      s += l2_distance(arcs.values.col(i), arcs.values.col(j), w);
      ++n;
    }
    if (!acc.count(ci)) continue;
    const double a = acc[ci].first / acc[ci].second;
    double b = 1e300;
    for (const auto& [c, sn] : acc)
      if (c != ci) b = std::min(b, sn.first / sn.second);
    total += (b - a) / std::max(a, b);
  }
  CHECK(mean_silhouette(arcs, m) == doctest::Approx(total / 15).epsilon(1e-12));
}
