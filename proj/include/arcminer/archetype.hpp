#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "arcminer/error.hpp"

namespace arcminer {

enum class Archetype { RagsToRiches, RichesToRags, ManInAHole, Icarus, Cinderella, Oedipus };

inline constexpr std::array<Archetype, 6> kArchetypes = {Archetype::RagsToRiches, Archetype::RichesToRags,
                                                         Archetype::ManInAHole,   Archetype::Icarus,
                                                         Archetype::Cinderella,   Archetype::Oedipus};

// Display name, e.g. "Man in a Hole".
std::string_view display_name(Archetype a);
// Identifier form, e.g. "ManInAHole".
std::string_view identifier(Archetype a);
std::optional<Archetype> parse_archetype(std::string_view text);

enum class Trend : signed char { fall = -1, rise = 1 };
using TrendSignature = std::vector<Trend>;

std::string to_string(const TrendSignature& signature);  // e.g. "-+"
TrendSignature signature_of(Archetype a);

struct TrendOptions {
  Eigen::Index smoothing_window = 5;
  double min_amplitude = 0.1;  // fraction of the centroid range
};

class DegenerateCentroid : public Error {
public:
  DegenerateCentroid() : Error("degenerate centroid") {}
};

class UnmappableSignature : public Error {
public:
  explicit UnmappableSignature(TrendSignature signature)
      : Error("no archetype for trend signature '" + to_string(signature) + "'"), signature_(std::move(signature)) {}
  const TrendSignature& signature() const noexcept { return signature_; }

private:
  TrendSignature signature_;
};

// Signs of the monotone runs of the smoothed centroid, after dropping runs
// smaller than min_amplitude * range and keeping at most the three largest.
TrendSignature trend_signature(const Eigen::Ref<const Eigen::VectorXd>& centroid, const TrendOptions& options = {});

struct ArchetypeLabel {
  Archetype name;
  TrendSignature trend_signature;
};

std::optional<Archetype> archetype_for(const TrendSignature& signature);
ArchetypeLabel label_centroid(const Eigen::Ref<const Eigen::VectorXd>& centroid, const TrendOptions& options = {});

} // namespace arcminer
