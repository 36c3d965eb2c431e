#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "arcminer/quadrature.hpp"

namespace arcminer {

struct ClusterConfig {
  Eigen::Index k = 6;
  std::uint64_t seed = 20190101;
  int max_iterations = 300;
  int restarts = 10;
  double tolerance = 1e-8;
};

// Arcs stored one per column, with a parallel id list.
struct ArcSet {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;  // rows = grid points, cols = arcs

  Eigen::Index size() const noexcept { return values.cols(); }
};

struct ClusterModel {
  Eigen::Index k = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd centroids;                 // one column per cluster
  std::map<std::string, int> assignments;    // arc id -> cluster index
  double within_cluster_objective = 0.0;     // sum of squared l2 distances
  int iterations_run = 0;
  int best_restart = 0;
  std::vector<double> objective_history;     // after every update step of the chosen restart

  std::vector<Eigen::Index> cluster_sizes() const;
};

// Lloyd iterations under the Simpson-weighted L2 metric with k-means++
// seeding; the best of `restarts` runs wins (ties go to the earlier restart).
// Arcs are processed in id order so results do not depend on input order.
ClusterModel kmeans_cluster(const ArcSet& arcs, const ClusterConfig& config);

// Mean silhouette under l2_distance; members of singleton clusters score 0.
double mean_silhouette(const ArcSet& arcs, const ClusterModel& model);

struct SweepRow {
  Eigen::Index k = 0;
  double objective = 0.0;
  double silhouette = 0.0;
};

std::vector<SweepRow> sweep_k(const ArcSet& arcs, std::vector<Eigen::Index> k_values, const ClusterConfig& config);

} // namespace arcminer
