#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "arcminer/arc.hpp"
#include "arcminer/archetype.hpp"
#include "arcminer/corpus.hpp"
#include "arcminer/kmeans.hpp"

namespace arcminer::synthetic {

// Portable generator: only raw mt19937_64 output is used, so samples are
// identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();  // Box-Muller
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Archetype shape sampled at t_j = j / (n - 1), range [-1, 1].
Eigen::VectorXd archetype_template(Archetype archetype, Eigen::Index n);

struct LabelledArcs {
  ArcSet arcs;
  std::vector<Archetype> truth;  // parallel to arcs.ids
};

// Raw series = template + N(0, sigma^2) noise, then compute_arc.
LabelledArcs archetype_arcs(int per_archetype, double noise_sigma, std::uint64_t seed, Eigen::Index raw_length = 200,
                            const ArcConfig& config = {});

// Words used by the generated scripts; every positive and negative word is
// in lexicon_tsv().
std::string lexicon_tsv();

struct ScriptOptions {
  int sentences = 320;
  double noise = 0.15;
};

// SRT text whose sentence valence follows the archetype's template.
std::string script_srt(Archetype archetype, Rng& rng, const ScriptOptions& options = {});

struct SubtitleFile {
  std::string stem;
  std::optional<std::string> imdb_id;  // written to the manifest
  Archetype archetype = Archetype::ManInAHole;
  int sentences = 320;
  UploaderRank rank = UploaderRank::gold;
  std::uint64_t downloads = 100;
};

struct MovieSpec {
  std::string imdb_id;
  Archetype archetype = Archetype::ManInAHole;
  bool has_domestic = true;
};

struct CorpusSpec {
  std::vector<SubtitleFile> files;
  std::vector<MovieSpec> movies;
  std::uint64_t seed = 7;
};

struct CorpusPaths {
  std::filesystem::path corpus_dir, metadata_csv, manifest_csv, lexicon_tsv;
};

// Writes corpus/*.srt, metadata.csv, manifest.csv and lexicon.tsv under root.
CorpusPaths write_corpus(const std::filesystem::path& root, const CorpusSpec& spec);

// Demo corpus: `movies` well-formed films cycling through the archetypes,
// plus one lower-download duplicate, one unranked upload, one short script
// and one film without metadata.
CorpusSpec demo_corpus(int movies, std::uint64_t seed);

} // namespace arcminer::synthetic
