#include "arcminer/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "arcminer/error.hpp"

namespace arcminer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Portable uniform [0, 1); std::uniform_real_distribution is not
// reproducible across standard libraries.
class UnitSampler {
public:
  explicit UnitSampler(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Eigen::Index index(Eigen::Index n) {
    return std::min<Eigen::Index>(static_cast<Eigen::Index>((*this)() * static_cast<double>(n)), n - 1);
  }

private:
  std::mt19937_64 engine_;
};

struct Workspace {
  const Eigen::MatrixXd& x;     // grid x arcs, id order
  const Eigen::VectorXd& wn;    // weights / total_weight

  double dist2(Eigen::Index i, const Eigen::MatrixXd& centroids, Eigen::Index c) const {
    return (wn.array() * (x.col(i) - centroids.col(c)).array().square()).sum();
  }
};

struct RunResult {
  Eigen::MatrixXd centroids;
  std::vector<int> labels;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

Eigen::MatrixXd seed_plus_plus(const Workspace& ws, Eigen::Index k, UnitSampler& rng) {
  const Eigen::Index n = ws.x.cols();
  Eigen::MatrixXd centroids(ws.x.rows(), k);
  centroids.col(0) = ws.x.col(rng.index(n));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = ws.dist2(i, centroids, 0);

  for (Eigen::Index c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng() * total;
      double cumulative = 0.0;
      pick = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double di = d2[static_cast<std::size_t>(i)];
        if (di <= 0.0) continue;
        cumulative += di;
        pick = i;
        if (cumulative > target) break;
      }
    } else {
      pick = rng.index(n);
    }
    centroids.col(c) = ws.x.col(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& di = d2[static_cast<std::size_t>(i)];
      di = std::min(di, ws.dist2(i, centroids, c));
    }
  }
  return centroids;
}

double objective_of(const Workspace& ws, const Eigen::MatrixXd& centroids, const std::vector<int>& labels) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < ws.x.cols(); ++i) total += ws.dist2(i, centroids, labels[static_cast<std::size_t>(i)]);
  return total;
}

RunResult lloyd(const Workspace& ws, Eigen::MatrixXd centroids, const ClusterConfig& config) {
  const Eigen::Index n = ws.x.cols();
  const Eigen::Index k = centroids.cols();
  RunResult run;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = ws.dist2(i, centroids, 0);
      for (Eigen::Index c = 1; c < k; ++c) {
        const double d = ws.dist2(i, centroids, c);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      auto& label = labels[static_cast<std::size_t>(i)];
      if (label != best) {
        label = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (const int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      // Steal the arc farthest from its own centroid out of a multi-member cluster.
      Eigen::Index donor = -1;
      double far = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(l)] < 2) continue;
        const double d = ws.dist2(i, centroids, l);
        if (d > far) {
          far = d;
          donor = i;
        }
      }
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(donor)])];
      labels[static_cast<std::size_t>(donor)] = static_cast<int>(c);
      ++counts[static_cast<std::size_t>(c)];
    }

    centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centroids.col(labels[static_cast<std::size_t>(i)]) += ws.x.col(i);
    for (Eigen::Index c = 0; c < k; ++c) centroids.col(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

    const double objective = objective_of(ws, centroids, labels);
    run.history.push_back(objective);
    run.iterations = iter + 1;
    if (run.history.size() >= 2) {
      const double prev = run.history[run.history.size() - 2];
      if (prev - objective <= config.tolerance * prev) break;
    }
  }
  run.centroids = std::move(centroids);
  run.labels = std::move(labels);
  run.objective = run.history.empty() ? objective_of(ws, run.centroids, run.labels) : run.history.back();
  return run;
}

} // namespace

std::vector<Eigen::Index> ClusterModel::cluster_sizes() const {
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  for (const auto& [id, c] : assignments) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

ClusterModel kmeans_cluster(const ArcSet& arcs, const ClusterConfig& config) {
  const Eigen::Index n = arcs.size();
  if (static_cast<std::size_t>(n) != arcs.ids.size()) throw std::invalid_argument("kmeans_cluster: ids/values size mismatch");
  if (config.k < 1) throw std::invalid_argument("kmeans_cluster: k must be at least 1");
  if (n < config.k) {
    throw Error("kmeans_cluster: " + std::to_string(n) + " arcs cannot form " + std::to_string(config.k) + " clusters");
  }
  if (config.max_iterations < 1 || config.restarts < 1) throw std::invalid_argument("kmeans_cluster: iteration and restart counts must be positive");
  if (std::set<std::string>(arcs.ids.begin(), arcs.ids.end()).size() != arcs.ids.size())
    throw std::invalid_argument("kmeans_cluster: arc ids must be unique");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return arcs.ids[static_cast<std::size_t>(a)] < arcs.ids[static_cast<std::size_t>(b)];
  });
  Eigen::MatrixXd x(arcs.values.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) x.col(i) = arcs.values.col(order[static_cast<std::size_t>(i)]);

  const auto quad = simpson_weight_vector<double>(x.rows());
  const Eigen::VectorXd wn = quad.weights / quad.total_weight;
  const Workspace ws{x, wn};

  RunResult best;
  int best_restart = -1;
  for (int r = 0; r < config.restarts; ++r) {
    UnitSampler rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1)));
    auto run = lloyd(ws, seed_plus_plus(ws, config.k, rng), config);
    if (best_restart < 0 || run.objective < best.objective) {
      best = std::move(run);
      best_restart = r;
    }
  }

  ClusterModel model;
  model.k = config.k;
  model.seed = config.seed;
  model.centroids = std::move(best.centroids);
  model.within_cluster_objective = best.objective;
  model.iterations_run = best.iterations;
  model.best_restart = best_restart;
  model.objective_history = std::move(best.history);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.assignments.emplace(arcs.ids[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])],
                              best.labels[static_cast<std::size_t>(i)]);
  }
  return model;
}

double mean_silhouette(const ArcSet& arcs, const ClusterModel& model) {
  const Eigen::Index n = arcs.size();
  if (n == 0) return 0.0;
  const auto quad = simpson_weight_vector<double>(arcs.values.rows());
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = model.assignments.at(arcs.ids[static_cast<std::size_t>(i)]);
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(model.k), 0);
  for (const int l : labels) ++sizes[static_cast<std::size_t>(l)];

  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(model.k));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (sizes[static_cast<std::size_t>(own)] < 2) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      sums[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += l2_distance(arcs.values.col(i), arcs.values.col(j), quad);
    }
    const double a = sums[static_cast<std::size_t>(own)] / static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < model.k; ++c) {
      if (c == own || sizes[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, sums[static_cast<std::size_t>(c)] / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    if (!std::isfinite(b)) continue;
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::vector<SweepRow> sweep_k(const ArcSet& arcs, std::vector<Eigen::Index> k_values, const ClusterConfig& config) {
  if (k_values.empty()) throw std::invalid_argument("sweep_k: no k values");
  std::sort(k_values.begin(), k_values.end());
  k_values.erase(std::unique(k_values.begin(), k_values.end()), k_values.end());
  if (k_values.front() < 2) throw std::invalid_argument("sweep_k: every k must be at least 2");
  std::vector<SweepRow> rows;
  for (const auto k : k_values) {
    ClusterConfig c = config;
    c.k = k;
    const auto model = kmeans_cluster(arcs, c);
    rows.push_back({k, model.within_cluster_objective, mean_silhouette(arcs, model)});
  }
  return rows;
}

} // namespace arcminer
