#pragma once

#include <Eigen/Core>

#include "arcminer/dct.hpp"
#include "arcminer/sentiment.hpp"

namespace arcminer {

struct ArcConfig {
  Eigen::Index low_pass_size = 5;
  Eigen::Index output_length = 100;
  bool rescale_output = true;
};

// Smoothed sentiment trajectory sampled at t_j = j / (length - 1).
struct EmotionalArc {
  Eigen::VectorXd values;

  Eigen::Index size() const noexcept { return values.size(); }
  Eigen::VectorXd time_grid() const { return Eigen::VectorXd::LinSpaced(values.size(), 0.0, 1.0); }
};

Eigen::VectorXd low_pass_reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coefficients, const ArcConfig& config);

// DCT, truncation to low_pass_size coefficients, resampling to output_length
// points, then (optionally) division by the peak magnitude. Throws Error("too
// few sentences") when the series is shorter than low_pass_size.
EmotionalArc compute_arc(const Eigen::Ref<const Eigen::VectorXd>& series, const ArcConfig& config = {});
inline EmotionalArc compute_arc(const RawValenceSeries& series, const ArcConfig& config = {}) {
  return compute_arc(series.values, config);
}

} // namespace arcminer
