#pragma once

// Published group sizes and domestic-gross means of the six arc groups, and
// the dummy-regression coefficients and standard errors they imply.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "arcminer/archetype.hpp"
#include "arcminer/corpus.hpp"

namespace fixture {

inline constexpr std::array<double, 6> kMeans = {29.71, 29.94, 37.48, 30.57, 33.63, 31.44};
inline constexpr std::array<double, 6> kSizes = {632, 1402, 1598, 1113, 804, 625};
inline constexpr double kTotalMean = 32.61;
inline constexpr double kTotalSize = 6174;
inline constexpr double kTotalSd = 58.68;
inline constexpr std::array<double, 6> kCoefficients = {-3.2333, -3.4599, 6.5613, -2.4914, 1.1690, -1.3031};
inline constexpr std::array<double, 6> kStandardErrors = {2.4636, 1.7823, 1.7032, 1.9427, 2.2192, 2.4761};
// Table 5, "All data (gross domestic revenue)".
inline constexpr std::array<int, 6> kAllDataHeat = {-1, -2, 5, -1, 1, -1};

struct Corpus {
  std::vector<arcminer::MovieRecord> movies;
  std::map<std::string, std::string> groups;
  std::vector<std::string> order;
};

// Movies whose group means and sizes equal the published ones and whose
// pooled standard deviation equals kTotalSd: each group is its mean plus
// +-d in equal numbers (one member sits at the mean for odd sizes).
inline Corpus corpus() {
  Corpus c;
  double grand = 0;
  for (std::size_t g = 0; g < 6; ++g) grand += kMeans[g] * kSizes[g];
  grand /= kTotalSize;
  double between = 0, spread = 0;
  for (std::size_t g = 0; g < 6; ++g) {
    between += kSizes[g] * (kMeans[g] - grand) * (kMeans[g] - grand);
    spread += static_cast<int>(kSizes[g]) % 2 ? kSizes[g] - 1 : kSizes[g];
  }
  const double d = std::sqrt(((kTotalSize - 1) * kTotalSd * kTotalSd - between) / spread);
  int serial = 0;
  for (std::size_t g = 0; g < 6; ++g) {
    const auto label = std::string(arcminer::display_name(arcminer::kArchetypes[g]));
    c.order.push_back(label);
    const int n = static_cast<int>(kSizes[g]);
    for (int i = 0; i < n; ++i) {
      arcminer::MovieRecord m;
      m.imdb_id = "tt" + std::to_string(1000000 + serial++);
      const bool centre = n % 2 && i == n - 1;
      m.domestic_gross = kMeans[g] + (centre ? 0.0 : (i % 2 ? d : -d));
      c.groups[m.imdb_id] = label;
      c.movies.push_back(std::move(m));
    }
  }
  return c;
}

} // namespace fixture
