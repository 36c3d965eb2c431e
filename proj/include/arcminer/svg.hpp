#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "arcminer/stats.hpp"

namespace arcminer::svg {

std::string escape(std::string_view text);

// One polyline per centroid column on a 0-100% by [-1, 1] frame.
std::string centroid_plot(const Eigen::Ref<const Eigen::MatrixXd>& centroids, const std::vector<std::string>& labels,
                          std::string_view title);

// Signed heat codes: green for positive effects, red for negative, grey n.a.
std::string heatmap(const std::vector<std::string>& row_labels, const std::vector<std::string>& column_labels,
                    const std::vector<std::vector<HeatCell>>& grid, std::string_view title);

} // namespace arcminer::svg
