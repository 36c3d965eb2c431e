// arcminer command-line front end.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "arcminer/error.hpp"
#include "arcminer/pipeline.hpp"
#include "arcminer/synthetic.hpp"

#ifndef ARCMINER_VERSION
#define ARCMINER_VERSION "0.0.0"
#endif

namespace {

struct Overrides {
  std::optional<std::string> config, corpus, metadata, lexicon, manifest, out;
  std::optional<long> low_pass, k, min_chars;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  bool raw_valence = false;
  std::vector<long> sweep_k;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "TOML-style key = value file; flags override it");
  cmd->add_option("--corpus", o.corpus, "Directory of .srt files");
  cmd->add_option("--metadata", o.metadata, "Movie metadata CSV");
  cmd->add_option("--lexicon", o.lexicon, "Word<TAB>value lexicon");
  cmd->add_option("--manifest", o.manifest, "CSV mapping file to imdb_id, uploader_rank, download_count");
  cmd->add_option("--out", o.out, "Output directory (default: out)");
  cmd->add_option("--low-pass", o.low_pass, "DCT coefficients retained (default 5)")->check(CLI::PositiveNumber);
  cmd->add_option("--k", o.k, "Number of clusters (default 6)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Clustering seed");
  cmd->add_option("--restarts", o.restarts, "k-means restarts (default 10)")->check(CLI::PositiveNumber);
  cmd->add_option("--min-chars", o.min_chars, "Minimum cleaned characters per script (default 10000)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--raw-valence", o.raw_valence, "Also write raw_valence.csv");
  cmd->add_option("--sweep-k", o.sweep_k, "Also write k_sweep.csv for these k values")->delimiter(',');
}

arcminer::PipelineConfig resolve(const Overrides& o) {
  arcminer::PipelineConfig c;
  if (o.config) arcminer::apply_config_file(c, *o.config);
  if (o.corpus) c.corpus_dir = *o.corpus;
  if (o.metadata) c.metadata_csv = *o.metadata;
  if (o.lexicon) c.lexicon_path = *o.lexicon;
  if (o.manifest) c.manifest_csv = *o.manifest;
  if (o.out) c.output_dir = *o.out;
  if (o.low_pass) c.arc.low_pass_size = *o.low_pass;
  if (o.k) c.cluster.k = *o.k;
  if (o.seed) c.cluster.seed = *o.seed;
  if (o.restarts) c.cluster.restarts = *o.restarts;
  if (o.min_chars) c.filter.min_cleaned_chars = *o.min_chars;
  if (o.raw_valence) c.write_raw_valence = true;
  if (!o.sweep_k.empty()) c.sweep_k.assign(o.sweep_k.begin(), o.sweep_k.end());
  return c;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emotional-arc mining over subtitle corpora"};
  app.set_version_flag("--version", ARCMINER_VERSION);
  app.require_subcommand(1);

  Overrides o;
  using Command = int (*)(const arcminer::PipelineConfig&, const arcminer::Log&);
  std::vector<std::pair<CLI::App*, Command>> commands = {
      {app.add_subcommand("ingest", "Parse, filter and join subtitles to metadata"), arcminer::cmd_ingest},
      {app.add_subcommand("arcs", "Score sentences and compute emotional arcs"), arcminer::cmd_arcs},
      {app.add_subcommand("cluster", "Cluster arcs and label archetypes"), arcminer::cmd_cluster},
      {app.add_subcommand("stats", "Summary tables, regressions, tests and heat maps"), arcminer::cmd_stats},
      {app.add_subcommand("all", "Run every stage"), arcminer::cmd_all},
  };
  for (auto& [cmd, fn] : commands) add_flags(cmd, o);

  std::string synth_out = "synthetic";
  int synth_movies = 6;
  std::uint64_t synth_seed = 7;
  auto* synth = app.add_subcommand("synth", "Write a synthetic demo corpus");
  synth->add_option("--out", synth_out, "Destination directory");
  synth->add_option("--movies", synth_movies, "Well-formed films besides the planted rejects")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : arcminer::kExitInputError;
  }

  const auto log = arcminer::Log::from_env();
  try {
    if (synth->parsed()) {
      const auto paths = arcminer::synthetic::write_corpus(synth_out, arcminer::synthetic::demo_corpus(synth_movies, synth_seed));
      std::cout << "corpus   " << paths.corpus_dir.string() << "\nmetadata " << paths.metadata_csv.string()
                << "\nmanifest " << paths.manifest_csv.string() << "\nlexicon  " << paths.lexicon_tsv.string() << "\n";
      return 0;
    }
    for (auto& [cmd, fn] : commands)
      if (cmd->parsed()) return fn(resolve(o), log);
  } catch (const arcminer::Error& e) {
    log.error(e.what());
    return arcminer::kExitInputError;
  }
  return arcminer::kExitInputError;
}
