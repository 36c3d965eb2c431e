#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace arcminer {

template <typename Scalar>
struct QuadratureWeights {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Scalar total_weight = Scalar(0);

  Eigen::Index size() const noexcept { return weights.size(); }
};

// Composite Simpson weights on a uniform grid over [0, 1]. An odd interval
// count closes with a 3/8 panel over the last three intervals.
template <typename Scalar = double>
QuadratureWeights<Scalar> simpson_weight_vector(Eigen::Index n_points) {
  if (n_points < 3) throw std::invalid_argument("simpson_weight_vector: need at least 3 points");
  const Eigen::Index intervals = n_points - 1;
  const Scalar h = Scalar(1) / Scalar(intervals);
  QuadratureWeights<Scalar> q;
  q.weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_points);

  const Eigen::Index simpson_intervals = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (Eigen::Index i = 0; i < simpson_intervals; i += 2) {
    q.weights[i] += h / Scalar(3);
    q.weights[i + 1] += Scalar(4) * h / Scalar(3);
    q.weights[i + 2] += h / Scalar(3);
  }
  if (simpson_intervals != intervals) {
    const Eigen::Index i = simpson_intervals;
    const Scalar c = Scalar(3) * h / Scalar(8);
    q.weights[i] += c;
    q.weights[i + 1] += Scalar(3) * c;
    q.weights[i + 2] += Scalar(3) * c;
    q.weights[i + 3] += c;
  }
  q.total_weight = q.weights.sum();
  return q;
}

template <typename Scalar, typename Derived>
Scalar integrate(const Eigen::MatrixBase<Derived>& samples, const QuadratureWeights<Scalar>& w) {
  if (samples.size() != w.size()) throw std::invalid_argument("integrate: length mismatch");
  return w.weights.dot(samples.derived().template cast<Scalar>());
}

// Squared grid L2 distance normalized by the total weight.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar l2_distance_squared(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                           const QuadratureWeights<Scalar>& w) {
  if (a.size() != b.size() || a.size() != w.size()) throw std::invalid_argument("l2_distance: length mismatch");
  return (w.weights.array() * (a - b).array().square()).sum() / w.total_weight;
}

template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar l2_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                   const QuadratureWeights<Scalar>& w) {
  using std::sqrt;
  return sqrt(l2_distance_squared(a, b, w));
}

} // namespace arcminer
