#include "arcminer/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>

namespace arcminer::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string heat_color(const HeatCell& cell) {
  if (!cell.code) return "#d9d9d9";
  static constexpr const char* positive[] = {"#f7fcf5", "#c7e9c0", "#74c476", "#31a354", "#006d2c"};
  static constexpr const char* negative[] = {"#fff5f0", "#fcbba1", "#fb6a4a", "#de2d26", "#a50f15"};
  const int code = *cell.code;
  const int tier = code < 0 ? -code : code;
  return code < 0 ? negative[tier - 1] : positive[tier - 1];
}

} // namespace

std::string escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string centroid_plot(const Eigen::Ref<const Eigen::MatrixXd>& centroids, const std::vector<std::string>& labels,
                          std::string_view title) {
  constexpr double width = 760, height = 420, left = 60, right = 200, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const auto x_of = [&](double t) { return left + t * plot_w; };
  const auto y_of = [&](double v) { return top + (1.0 - (v + 1.0) / 2.0) * plot_h; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
    << width << ' ' << height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = -1.0 + 0.5 * tick;
    s << "<line x1=\"" << num(left) << "\" y1=\"" << num(y_of(v)) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
      << num(y_of(v)) << "\" stroke=\"#e0e0e0\"/>\n"
      << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y_of(v) + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  for (int tick = 0; tick <= 5; ++tick) {
    const double t = 0.2 * tick;
    s << "<text x=\"" << num(x_of(t)) << "\" y=\"" << num(top + plot_h + 18)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << tick * 20 << "%</text>\n";
  }
  s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
    << "\" fill=\"none\" stroke=\"black\"/>\n"
    << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 10)
    << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">Narrative time</text>\n";

  const Eigen::Index points = centroids.rows();
  for (Eigen::Index c = 0; c < centroids.cols(); ++c) {
    const char* color = kPalette[static_cast<std::size_t>(c) % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (Eigen::Index j = 0; j < points; ++j) {
      const double t = points > 1 ? static_cast<double>(j) / static_cast<double>(points - 1) : 0.0;
      if (j) s << ' ';
      s << num(x_of(t)) << ',' << num(y_of(std::clamp(centroids(j, c), -1.0, 1.0)));
    }
    s << "\"/>\n";
    const double ly = top + 16 + 20.0 * static_cast<double>(c);
    const std::string label = static_cast<std::size_t>(c) < labels.size() ? labels[static_cast<std::size_t>(c)]
                                                                          : "cluster " + std::to_string(c);
    s << "<line x1=\"" << num(left + plot_w + 14) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + plot_w + 34)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n"
      << "<text x=\"" << num(left + plot_w + 40) << "\" y=\"" << num(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string heatmap(const std::vector<std::string>& row_labels, const std::vector<std::string>& column_labels,
                    const std::vector<std::vector<HeatCell>>& grid, std::string_view title) {
  constexpr double cell_w = 96, cell_h = 24, left = 260, top = 70;
  const double width = left + cell_w * static_cast<double>(column_labels.size()) + 20;
  const double height = top + cell_h * static_cast<double>(row_labels.size()) + 20;

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"10\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
  for (std::size_t c = 0; c < column_labels.size(); ++c) {
    s << "<text x=\"" << num(left + cell_w * (static_cast<double>(c) + 0.5)) << "\" y=\"" << num(top - 10)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << escape(column_labels[c]) << "</text>\n";
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const double y = top + cell_h * static_cast<double>(r);
    s << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + cell_h * 0.65)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << escape(row_labels[r]) << "</text>\n";
    for (std::size_t c = 0; c < column_labels.size(); ++c) {
      const HeatCell cell = (r < grid.size() && c < grid[r].size()) ? grid[r][c] : HeatCell{};
      const double x = left + cell_w * static_cast<double>(c);
      s << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell_w) << "\" height=\"" << num(cell_h)
        << "\" fill=\"" << heat_color(cell) << "\" stroke=\"white\"/>\n"
        << "<text x=\"" << num(x + cell_w / 2) << "\" y=\"" << num(y + cell_h * 0.65)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << escape(cell.to_string())
        << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

} // namespace arcminer::svg
