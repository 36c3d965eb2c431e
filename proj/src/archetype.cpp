#include "arcminer/archetype.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace arcminer {

namespace {

struct Run {
  Trend sign;
  double amplitude;
};

void merge_adjacent(std::vector<Run>& runs) {
  std::vector<Run> merged;
  for (const auto& r : runs) {
    if (!merged.empty() && merged.back().sign == r.sign) {
      merged.back().amplitude += r.amplitude;
    } else {
      merged.push_back(r);
    }
  }
  runs = std::move(merged);
}

Eigen::VectorXd moving_average(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index window) {
  if (window <= 1) return x;
  const Eigen::Index half = window / 2;
  const Eigen::Index n = x.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + (window - 1 - half));
    out[i] = x.segment(lo, hi - lo + 1).mean();
  }
  return out;
}

} // namespace

std::string_view display_name(Archetype a) {
  switch (a) {
    case Archetype::RagsToRiches: return "Rags to Riches";
    case Archetype::RichesToRags: return "Riches to Rags";
    case Archetype::ManInAHole: return "Man in a Hole";
    case Archetype::Icarus: return "Icarus";
    case Archetype::Cinderella: return "Cinderella";
    case Archetype::Oedipus: return "Oedipus";
  }
  return "";
}

std::string_view identifier(Archetype a) {
  switch (a) {
    case Archetype::RagsToRiches: return "RagsToRiches";
    case Archetype::RichesToRags: return "RichesToRags";
    case Archetype::ManInAHole: return "ManInAHole";
    case Archetype::Icarus: return "Icarus";
    case Archetype::Cinderella: return "Cinderella";
    case Archetype::Oedipus: return "Oedipus";
  }
  return "";
}

std::optional<Archetype> parse_archetype(std::string_view text) {
  for (const auto a : kArchetypes) {
    if (text == identifier(a) || text == display_name(a)) return a;
  }
  return std::nullopt;
}

std::string to_string(const TrendSignature& signature) {
  std::string s;
  for (const auto t : signature) s += (t == Trend::rise) ? '+' : '-';
  return s;
}

TrendSignature signature_of(Archetype a) {
  constexpr auto up = Trend::rise;
  constexpr auto down = Trend::fall;
  switch (a) {
    case Archetype::RagsToRiches: return {up};
    case Archetype::RichesToRags: return {down};
    case Archetype::ManInAHole: return {down, up};
    case Archetype::Icarus: return {up, down};
    case Archetype::Cinderella: return {up, down, up};
    case Archetype::Oedipus: return {down, up, down};
  }
  return {};
}

TrendSignature trend_signature(const Eigen::Ref<const Eigen::VectorXd>& centroid, const TrendOptions& options) {
  if (centroid.size() < 3) throw std::invalid_argument("trend_signature: centroid needs at least 3 points");
  if (options.smoothing_window < 1) throw std::invalid_argument("trend_signature: smoothing_window must be positive");
  const double range = centroid.maxCoeff() - centroid.minCoeff();
  const double scale = std::max(1.0, centroid.cwiseAbs().maxCoeff());
  if (!(range > 1e-12 * scale)) throw DegenerateCentroid();

  const Eigen::VectorXd smooth = moving_average(centroid, options.smoothing_window);
  std::vector<Run> runs;
  for (Eigen::Index i = 0; i + 1 < smooth.size(); ++i) {
    const double d = smooth[i + 1] - smooth[i];
    if (d == 0.0) continue;
    runs.push_back({d > 0 ? Trend::rise : Trend::fall, std::abs(d)});
  }
  merge_adjacent(runs);

  std::erase_if(runs, [&](const Run& r) { return r.amplitude < options.min_amplitude * range; });
  merge_adjacent(runs);

  if (runs.size() > 3) {
    std::vector<std::size_t> idx(runs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return runs[a].amplitude > runs[b].amplitude; });
    idx.resize(3);
    std::sort(idx.begin(), idx.end());
    std::vector<Run> kept;
    for (const auto i : idx) kept.push_back(runs[i]);
    runs = std::move(kept);
    merge_adjacent(runs);
  }

  TrendSignature sig;
  for (const auto& r : runs) sig.push_back(r.sign);
  return sig;
}

std::optional<Archetype> archetype_for(const TrendSignature& signature) {
  for (const auto a : kArchetypes) {
    if (signature_of(a) == signature) return a;
  }
  return std::nullopt;
}

ArchetypeLabel label_centroid(const Eigen::Ref<const Eigen::VectorXd>& centroid, const TrendOptions& options) {
  auto sig = trend_signature(centroid, options);
  const auto a = archetype_for(sig);
  if (!a) throw UnmappableSignature(std::move(sig));
  return {*a, std::move(sig)};
}

} // namespace arcminer
