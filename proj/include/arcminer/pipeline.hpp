#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "arcminer/arc.hpp"
#include "arcminer/corpus.hpp"
#include "arcminer/kmeans.hpp"

namespace arcminer {

struct PipelineConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path metadata_csv;
  std::filesystem::path lexicon_path;
  std::filesystem::path manifest_csv;  // optional file -> imdb_id map
  std::filesystem::path output_dir = "out";
  ArcConfig arc;
  ClusterConfig cluster;
  FilterPolicy filter;
  bool write_raw_valence = false;
  std::vector<Eigen::Index> sweep_k;  // empty: no sweep
};

// Keys, optionally grouped under [arc], [cluster] or [filter] tables:
//   corpus_dir metadata_csv lexicon_path manifest_csv output_dir
//   raw_valence sweep_k
//   arc.low_pass_size arc.output_length arc.rescale_output
//   cluster.k cluster.seed cluster.max_iterations cluster.restarts cluster.tolerance
//   filter.min_cleaned_chars filter.require_ranked_uploader
//   filter.require_domestic_revenue filter.dedupe_by_download_count filter.dedupe_by_imdb_id
// Relative paths resolve against base_dir. Throws ParseError.
void apply_config_text(PipelineConfig& config, std::string_view text, const std::filesystem::path& base_dir = {});
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitEmptyCorpus = 3,
  kExitScoringFailures = 4,
  kExitClusteringInfeasible = 5,
  kExitStatsInfeasible = 6,
};

enum class LogLevel { quiet, error, warn, info, debug };

// "quiet", "error", "warn", "info", "debug" or 0-4.
LogLevel parse_log_level(std::string_view text);

class Log {
public:
  explicit Log(LogLevel level = LogLevel::warn, std::ostream* sink = nullptr);
  // Level from ARCMINER_LOG, warn when unset or unrecognised.
  static Log from_env(std::ostream* sink = nullptr);

  bool enabled(LogLevel level) const noexcept { return level <= level_ && level_ != LogLevel::quiet; }
  void error(std::string_view message) const { write(LogLevel::error, message); }
  void warn(std::string_view message) const { write(LogLevel::warn, message); }
  void info(std::string_view message) const { write(LogLevel::info, message); }
  void debug(std::string_view message) const { write(LogLevel::debug, message); }

private:
  void write(LogLevel level, std::string_view message) const;
  LogLevel level_;
  std::ostream* sink_;
};

// Each command reads from and writes to config.output_dir and returns an
// ExitCode.
int cmd_ingest(const PipelineConfig& config, const Log& log);
int cmd_arcs(const PipelineConfig& config, const Log& log);
int cmd_cluster(const PipelineConfig& config, const Log& log);
int cmd_stats(const PipelineConfig& config, const Log& log);
// Runs every stage; scoring failures are reported at the end.
int cmd_all(const PipelineConfig& config, const Log& log);

// Column names of arcs.csv.
std::vector<std::string> arc_csv_header(Eigen::Index output_length);
ArcSet read_arcs_csv(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

} // namespace arcminer
