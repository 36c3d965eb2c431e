#include "arcminer/arc.hpp"

#include <stdexcept>
#include <string>

#include "arcminer/error.hpp"

namespace arcminer {

namespace {

void validate(const ArcConfig& config) {
  if (config.low_pass_size < 1) throw std::invalid_argument("low_pass_size must be at least 1");
  if (config.output_length < 2) throw std::invalid_argument("output_length must be at least 2");
}

} // namespace

Eigen::VectorXd low_pass_reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coefficients, const ArcConfig& config) {
  validate(config);
  if (coefficients.size() == 0) throw std::invalid_argument("low_pass_reconstruct: empty coefficients");
  if (config.low_pass_size > coefficients.size()) {
    throw std::invalid_argument("low_pass_size " + std::to_string(config.low_pass_size) + " exceeds coefficient count " +
                                std::to_string(coefficients.size()));
  }
  return dct_low_pass(coefficients, config.low_pass_size, config.output_length);
}

EmotionalArc compute_arc(const Eigen::Ref<const Eigen::VectorXd>& series, const ArcConfig& config) {
  validate(config);
  if (series.size() < config.low_pass_size) {
    throw Error("too few sentences: " + std::to_string(series.size()) + " < low_pass_size " +
                std::to_string(config.low_pass_size));
  }
  EmotionalArc arc{low_pass_reconstruct(dct_forward(series), config)};
  if (config.rescale_output) {
    const double peak = arc.values.cwiseAbs().maxCoeff();
    if (peak > 0.0) arc.values /= peak;
  }
  return arc;
}

} // namespace arcminer
