#include "arcminer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "arcminer/archetype.hpp"
#include "arcminer/csv.hpp"
#include "arcminer/error.hpp"
#include "arcminer/svg.hpp"
#include "arcminer/tables.hpp"
#include "arcminer/text.hpp"

#ifndef ARCMINER_VERSION
#define ARCMINER_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace arcminer {

namespace {

// Config parsing ------------------------------------------------------------

std::string unquote(std::string_view v, std::size_t line) {
  if (v.size() < 2 || v.back() != v.front()) throw ParseError("unterminated string", line);
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && v.front() == '"' && i + 2 < v.size()) {
      const char c = v[++i];
      out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
    } else {
      out += v[i];
    }
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::int64_t as_int(const std::string& v, const std::string& key, std::size_t line) {
  std::int64_t out = 0;
  std::size_t used = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParseError(key + ": expected an integer, got '" + v + "'", line);
  return out;
}

double as_double(const std::string& v, const std::string& key, std::size_t line) {
  double out = 0;
  std::size_t used = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParseError(key + ": expected a number, got '" + v + "'", line);
  return out;
}

bool as_bool(const std::string& v, const std::string& key, std::size_t line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError(key + ": expected true or false, got '" + v + "'", line);
}

std::vector<std::string> as_list(std::string_view v) {
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::int64_t positive(std::int64_t v, const std::string& key, std::size_t line) {
  if (v < 1) throw ParseError(key + " must be positive", line);
  return v;
}

// Filesystem helpers --------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const fs::path& path) { return hex(fnv1a(read_file(path))); }

class InputError : public Error {
public:
  using Error::Error;
};

void require_file(const fs::path& path, std::string_view what) {
  if (path.empty()) throw InputError(std::string(what) + " not given");
  if (!fs::is_regular_file(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

void require_dir(const fs::path& path, std::string_view what) {
  if (path.empty()) throw InputError(std::string(what) + " not given");
  if (!fs::is_directory(path)) throw InputError(std::string(what) + " not found: " + path.string());
}

// Run manifest --------------------------------------------------------------

json config_snapshot(const PipelineConfig& c) {
  return {
      {"corpus_dir", c.corpus_dir.string()},
      {"metadata_csv", c.metadata_csv.string()},
      {"lexicon_path", c.lexicon_path.string()},
      {"manifest_csv", c.manifest_csv.string()},
      {"output_dir", c.output_dir.string()},
      {"raw_valence", c.write_raw_valence},
      {"sweep_k", c.sweep_k},
      {"arc",
       {{"low_pass_size", c.arc.low_pass_size},
        {"output_length", c.arc.output_length},
        {"rescale_output", c.arc.rescale_output}}},
      {"cluster",
       {{"k", c.cluster.k},
        {"seed", c.cluster.seed},
        {"max_iterations", c.cluster.max_iterations},
        {"restarts", c.cluster.restarts},
        {"tolerance", c.cluster.tolerance}}},
      {"filter",
       {{"min_cleaned_chars", c.filter.min_cleaned_chars},
        {"require_ranked_uploader", c.filter.require_ranked_uploader},
        {"require_domestic_revenue", c.filter.require_domestic_revenue},
        {"dedupe_by_download_count", c.filter.dedupe_by_download_count},
        {"dedupe_by_imdb_id", c.filter.dedupe_by_imdb_id}}},
  };
}

class RunManifest {
public:
  RunManifest(std::string command, const PipelineConfig& config) : command_(std::move(command)) {
    doc_ = {{"tool", "arcminer"}, {"version", ARCMINER_VERSION}, {"command", command_},
            {"config", config_snapshot(config)}, {"inputs", json::object()}, {"counts", json::object()},
            {"wall_clock_ms", json::object()}};
  }
  void input(const std::string& name, const std::string& digest) { doc_["inputs"][name] = digest; }
  void count(const std::string& name, std::size_t n) { doc_["counts"][name] = n; }
  template <typename F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Timer {
      json& slot;
      std::chrono::steady_clock::time_point t0;
      ~Timer() {
        slot = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
    } timer{doc_["wall_clock_ms"][name], t0};
    return f();
  }
  void write(const fs::path& dir) const { write_file(dir / ("manifest." + command_ + ".json"), doc_.dump(2) + "\n"); }

private:
  std::string command_;
  json doc_;
};

// Joined corpus serialization -----------------------------------------------

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string format_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

json movie_json(const MovieRecord& m) {
  json genres = json::array();
  for (const auto g : m.genres) genres.push_back(std::string(to_string(g)));
  return {
      {"imdb_id", m.imdb_id},
      {"title", m.title},
      {"release_date", m.release_date ? json(format_date(*m.release_date)) : json(nullptr)},
      {"domestic_gross", opt(m.domestic_gross)},
      {"worldwide_gross", opt(m.worldwide_gross)},
      {"budget", opt(m.budget)},
      {"imdb_rating", opt(m.imdb_rating)},
      {"metascore", opt(m.metascore)},
      {"rating_count", opt(m.rating_count)},
      {"user_reviews", opt(m.user_reviews)},
      {"critic_reviews", opt(m.critic_reviews)},
      {"oscars_won", opt(m.oscars_won)},
      {"other_awards", opt(m.other_awards)},
      {"other_award_nominations", opt(m.other_award_nominations)},
      {"runtime_min", opt(m.runtime_min)},
      {"genres", genres},
      {"director", opt(m.director)},
      {"age_rating", opt(m.age_rating)},
  };
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

MovieRecord movie_from_json(const json& j) {
  MovieRecord m;
  m.imdb_id = j.at("imdb_id").get<std::string>();
  m.title = j.value("title", "");
  if (const auto d = get_opt<std::string>(j, "release_date")) {
    int y = 0;
    unsigned mo = 0, da = 0;
    if (std::sscanf(d->c_str(), "%d-%u-%u", &y, &mo, &da) == 3)
      m.release_date = std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{da}};
  }
  m.domestic_gross = get_opt<double>(j, "domestic_gross");
  m.worldwide_gross = get_opt<double>(j, "worldwide_gross");
  m.budget = get_opt<double>(j, "budget");
  m.imdb_rating = get_opt<double>(j, "imdb_rating");
  m.metascore = get_opt<double>(j, "metascore");
  m.rating_count = get_opt<std::uint64_t>(j, "rating_count");
  m.user_reviews = get_opt<std::uint64_t>(j, "user_reviews");
  m.critic_reviews = get_opt<std::uint64_t>(j, "critic_reviews");
  m.oscars_won = get_opt<std::uint64_t>(j, "oscars_won");
  m.other_awards = get_opt<std::uint64_t>(j, "other_awards");
  m.other_award_nominations = get_opt<std::uint64_t>(j, "other_award_nominations");
  m.runtime_min = get_opt<double>(j, "runtime_min");
  if (const auto it = j.find("genres"); it != j.end())
    for (const auto& g : *it) m.genres.insert(parse_genre(g.get<std::string>()));
  m.director = get_opt<std::string>(j, "director");
  m.age_rating = get_opt<std::string>(j, "age_rating");
  return m;
}

json record_json(const JoinedRecord& r) {
  json cues = json::array();
  for (const auto& c : r.record.document.cues)
    cues.push_back({{"index", c.index}, {"start_ms", c.start_ms}, {"end_ms", c.end_ms}, {"text", c.text}});
  return {
      {"imdb_id", r.movie.imdb_id},
      {"source_id", r.record.document.source_id},
      {"uploader_rank", std::string(to_string(r.record.uploader_rank))},
      {"download_count", r.record.download_count},
      {"cleaned_char_count", r.record.document.cleaned_char_count},
      {"movie", movie_json(r.movie)},
      {"cues", cues},
  };
}

struct CorpusEntry {
  std::string imdb_id;
  SubtitleDocument document;
  MovieRecord movie;
};

std::vector<CorpusEntry> read_corpus_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("joined corpus not found: " + path.string() + " (run ingest first)");
  std::vector<CorpusEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      CorpusEntry e;
      e.imdb_id = j.at("imdb_id").get<std::string>();
      e.document.source_id = j.value("source_id", e.imdb_id);
      for (const auto& c : j.at("cues"))
        e.document.cues.push_back({c.at("index").get<std::uint32_t>(), c.at("start_ms").get<std::int64_t>(),
                                   c.at("end_ms").get<std::int64_t>(), c.at("text").get<std::string>()});
      normalize(e.document);
      e.movie = movie_from_json(j.at("movie"));
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError(path.string() + ": " + ex.what(), n);
    }
  }
  return out;
}

struct ClusterFile {
  std::map<std::string, int> assignments;
  std::vector<std::string> labels;  // per cluster index
};

ClusterFile read_clusters_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cluster model not found: " + path.string() + " (run cluster first)");
  try {
    const auto j = json::parse(in);
    ClusterFile out;
    out.assignments = j.at("assignments").get<std::map<std::string, int>>();
    out.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& [id, c] : out.assignments)
      if (c < 0 || static_cast<std::size_t>(c) >= out.labels.size())
        throw InputError("cluster index out of range for " + id);
    return out;
  } catch (const json::exception& ex) {
    throw InputError(path.string() + ": " + ex.what());
  }
}

std::string corpus_digest(const std::vector<fs::path>& files) {
  std::uint64_t h = fnv1a("");
  for (const auto& f : files) {
    h = fnv1a(f.filename().string(), h);
    h = fnv1a(std::string_view("\0", 1), h);
    h = fnv1a(read_file(f), h);
  }
  return hex(h);
}

std::vector<fs::path> list_srt(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    if (to_lower_ascii(e.path().extension().string()) == ".srt") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Stage bodies --------------------------------------------------------------

int guarded(const Log& log, const char* command, int (*body)(const PipelineConfig&, const Log&),
            const PipelineConfig& config) {
  try {
    return body(config, log);
  } catch (const InputError& e) {
    log.error(std::string(command) + ": " + e.what());
    return kExitInputError;
  } catch (const ParseError& e) {
    log.error(std::string(command) + ": " + e.what());
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    log.error(std::string(command) + ": " + e.what());
    return kExitInputError;
  } catch (const Error& e) {
    log.error(std::string(command) + ": " + e.what());
    return kExitInputError;
  }
}

int ingest_body(const PipelineConfig& config, const Log& log) {
  require_dir(config.corpus_dir, "corpus directory");
  require_file(config.metadata_csv, "metadata file");
  if (!config.manifest_csv.empty()) require_file(config.manifest_csv, "manifest file");
  fs::create_directories(config.output_dir);
  RunManifest manifest("ingest", config);

  const auto rows = manifest.stage("metadata", [&] { return load_metadata_csv(config.metadata_csv); });
  const auto movies = movies_of(rows);
  if (const auto dup = find_duplicate_id(movies)) throw InputError("duplicate imdb_id in metadata: " + *dup);
  manifest.input("metadata_csv", file_digest(config.metadata_csv));
  std::map<std::string, const MetadataRow*> meta_by_id;
  for (const auto& r : rows) meta_by_id.emplace(r.movie.imdb_id, &r);

  std::map<std::string, ManifestEntry> by_file;
  if (!config.manifest_csv.empty()) {
    manifest.input("manifest_csv", file_digest(config.manifest_csv));
    for (auto& e : load_manifest_csv(config.manifest_csv)) {
      const auto stem = fs::path(e.file).stem().string();
      by_file.emplace(stem, e);
      by_file.emplace(e.file, std::move(e));
    }
  }

  const auto files = list_srt(config.corpus_dir);
  manifest.input("corpus", corpus_digest(files));
  manifest.count("srt_files", files.size());
  if (files.empty()) {
    log.error("ingest: no .srt files in " + config.corpus_dir.string());
    manifest.write(config.output_dir);
    return kExitEmptyCorpus;
  }

  std::vector<CorpusRecord> records;
  manifest.stage("parse", [&] {
    for (const auto& path : files) {
      const auto stem = path.stem().string();
      CorpusRecord rec;
      try {
        auto parsed = parse_srt(read_file(path), stem);
        for (const auto& w : parsed.warnings) log.debug(path.filename().string() + ": " + w);
        if (!parsed.warnings.empty())
          log.info(path.filename().string() + ": " + std::to_string(parsed.warnings.size()) + " cue warnings");
        rec.document = std::move(parsed.document);
      } catch (const Error& e) {
        log.warn(path.filename().string() + ": " + e.what());
        continue;
      }
      const ManifestEntry* entry = nullptr;
      if (auto it = by_file.find(path.filename().string()); it != by_file.end()) entry = &it->second;
      else if (auto it2 = by_file.find(stem); it2 != by_file.end()) entry = &it2->second;
      rec.imdb_id = entry && entry->imdb_id ? entry->imdb_id : std::optional<std::string>(stem);
      const MetadataRow* meta = nullptr;
      if (auto it = meta_by_id.find(*rec.imdb_id); it != meta_by_id.end()) meta = it->second;
      if (entry && entry->uploader_rank) rec.uploader_rank = *entry->uploader_rank;
      else if (meta && meta->uploader_rank) rec.uploader_rank = *meta->uploader_rank;
      if (entry && entry->download_count) rec.download_count = *entry->download_count;
      else if (meta && meta->download_count) rec.download_count = *meta->download_count;
      records.push_back(std::move(rec));
    }
    return 0;
  });

  const std::size_t parsed_count = records.size();
  auto outcome = manifest.stage("filter", [&] { return apply_quality_filters(std::move(records), movies, config.filter); });
  FilterReport report;
  report.counts_after_each_stage.emplace_back("srt_files", files.size());
  report.counts_after_each_stage.emplace_back("parsed", parsed_count);
  for (const auto& row : outcome.report.counts_after_each_stage) report.counts_after_each_stage.push_back(row);
  write_file(config.output_dir / "filter_report.csv", report.to_csv());
  for (const auto& [stage, n] : report.counts_after_each_stage) manifest.count(stage, n);

  auto joined = join_metadata(outcome.survivors, movies);
  std::string unmatched = "source_id\n";
  for (const auto& id : joined.unmatched) {
    log.warn("ingest: no metadata for " + id);
    unmatched += csv::escape(id) + "\n";
  }
  write_file(config.output_dir / "unmatched.csv", unmatched);

  std::sort(joined.pairs.begin(), joined.pairs.end(),
            [](const JoinedRecord& a, const JoinedRecord& b) { return a.movie.imdb_id < b.movie.imdb_id; });
  std::string jsonl;
  for (const auto& p : joined.pairs) jsonl += record_json(p).dump() + "\n";
  write_file(config.output_dir / "corpus.jsonl", jsonl);
  manifest.count("joined", joined.pairs.size());
  manifest.write(config.output_dir);
  log.info("ingest: " + std::to_string(joined.pairs.size()) + " of " + std::to_string(files.size()) +
           " files joined");

  if (joined.pairs.empty()) {
    log.error("ingest: no records survived filtering");
    return kExitEmptyCorpus;
  }
  return kExitOk;
}

int arcs_body(const PipelineConfig& config, const Log& log) {
  require_file(config.lexicon_path, "lexicon file");
  const auto corpus_path = config.output_dir / "corpus.jsonl";
  RunManifest manifest("arcs", config);
  manifest.input("corpus.jsonl", fs::is_regular_file(corpus_path) ? file_digest(corpus_path) : "");
  manifest.input("lexicon", file_digest(config.lexicon_path));

  const auto corpus = manifest.stage("load", [&] { return read_corpus_jsonl(corpus_path); });
  auto lex = load_lexicon(config.lexicon_path);
  for (const auto& w : lex.warnings) log.warn("lexicon: " + w);
  if (corpus.empty()) {
    log.error("arcs: joined corpus is empty");
    return kExitEmptyCorpus;
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  std::string raw = "imdb_id,sentence_index,valence\n";
  std::size_t failures = 0;
  manifest.stage("score", [&] {
    for (const auto& e : corpus) {
      try {
        const auto series = score_document(e.document, lex.lexicon);
        const auto arc = compute_arc(series, config.arc);
        std::vector<std::string> cells{e.imdb_id};
        for (Eigen::Index i = 0; i < arc.size(); ++i) cells.push_back(csv::format_fixed(arc.values[i]));
        rows.emplace_back(e.imdb_id, std::move(cells));
        if (config.write_raw_valence)
          for (Eigen::Index i = 0; i < series.values.size(); ++i)
            raw += csv::join({e.imdb_id, std::to_string(i), csv::format_fixed(series.values[i])}) + "\n";
      } catch (const Error& ex) {
        ++failures;
        log.warn("arcs: skipping " + e.imdb_id + ": " + ex.what());
      }
    }
    return 0;
  });
  std::sort(rows.begin(), rows.end());

  std::string out = csv::join(arc_csv_header(config.arc.output_length)) + "\n";
  for (const auto& [id, cells] : rows) out += csv::join(cells) + "\n";
  write_file(config.output_dir / "arcs.csv", out);
  if (config.write_raw_valence) write_file(config.output_dir / "raw_valence.csv", raw);
  manifest.count("movies", corpus.size());
  manifest.count("arcs", rows.size());
  manifest.count("failures", failures);
  manifest.write(config.output_dir);
  log.info("arcs: " + std::to_string(rows.size()) + " arcs, " + std::to_string(failures) + " failures");
  return failures ? kExitScoringFailures : kExitOk;
}

std::vector<std::string> centroid_labels(const ClusterModel& model, std::vector<std::string>& signatures) {
  std::vector<std::string> labels;
  for (Eigen::Index c = 0; c < model.k; ++c) {
    std::string label = "Unlabeled", signature;
    try {
      signature = to_string(trend_signature(model.centroids.col(c)));
      label = std::string(display_name(label_centroid(model.centroids.col(c)).name));
    } catch (const Error&) {
    }
    labels.push_back(label);
    signatures.push_back(signature);
  }
  std::map<std::string, int> seen;
  for (const auto& l : labels) ++seen[l];
  for (std::size_t c = 0; c < labels.size(); ++c)
    if (seen[labels[c]] > 1) labels[c] += " (cluster " + std::to_string(c) + ")";
  return labels;
}

int cluster_body(const PipelineConfig& config, const Log& log) {
  const auto arcs_path = config.output_dir / "arcs.csv";
  if (!fs::is_regular_file(arcs_path)) throw InputError("arcs not found: " + arcs_path.string() + " (run arcs first)");
  if (config.cluster.k < 1) throw InputError("k must be at least 1");
  RunManifest manifest("cluster", config);
  manifest.input("arcs.csv", file_digest(arcs_path));
  const auto arcs = read_arcs_csv(arcs_path);
  if (arcs.size() < config.cluster.k) {
    log.error("cluster: " + std::to_string(arcs.size()) + " arcs cannot form " + std::to_string(config.cluster.k) +
              " clusters");
    return kExitClusteringInfeasible;
  }

  const auto model = manifest.stage("kmeans", [&] { return kmeans_cluster(arcs, config.cluster); });
  std::vector<std::string> signatures;
  const auto labels = centroid_labels(model, signatures);
  const auto sizes = model.cluster_sizes();

  json centroids = json::array();
  for (Eigen::Index c = 0; c < model.k; ++c) {
    std::vector<double> col(model.centroids.col(c).data(), model.centroids.col(c).data() + model.centroids.rows());
    centroids.push_back(col);
  }
  const json doc = {{"k", model.k},
                    {"seed", model.seed},
                    {"objective", model.within_cluster_objective},
                    {"iterations", model.iterations_run},
                    {"best_restart", model.best_restart},
                    {"labels", labels},
                    {"signatures", signatures},
                    {"sizes", sizes},
                    {"centroids", centroids},
                    {"assignments", model.assignments}};
  write_file(config.output_dir / "clusters.json", doc.dump(2) + "\n");

  std::string lab = "cluster_index,label,signature\n";
  for (Eigen::Index c = 0; c < model.k; ++c)
    lab += csv::join({std::to_string(c), labels[c], signatures[c]}) + "\n";
  write_file(config.output_dir / "labels.csv", lab);
  write_file(config.output_dir / "centroids.svg",
             svg::centroid_plot(model.centroids, labels, "Emotional arc centroids (k=" + std::to_string(model.k) + ")"));

  if (!config.sweep_k.empty()) {
    std::vector<Eigen::Index> ks;
    for (const auto k : config.sweep_k)
      if (k <= arcs.size()) ks.push_back(k);
      else log.warn("cluster: sweep skips k=" + std::to_string(k));
    const auto sweep = manifest.stage("sweep", [&] { return sweep_k(arcs, ks, config.cluster); });
    std::string out = "k,objective,silhouette\n";
    for (const auto& r : sweep)
      out += csv::join({std::to_string(r.k), csv::format_fixed(r.objective), csv::format_fixed(r.silhouette)}) + "\n";
    write_file(config.output_dir / "k_sweep.csv", out);
  }
  manifest.count("arcs", arcs.size());
  manifest.write(config.output_dir);
  log.info("cluster: objective " + csv::format_fixed(model.within_cluster_objective));
  return kExitOk;
}

int stats_body(const PipelineConfig& config, const Log& log) {
  const auto corpus_path = config.output_dir / "corpus.jsonl";
  const auto clusters_path = config.output_dir / "clusters.json";
  RunManifest manifest("stats", config);
  const auto corpus = read_corpus_jsonl(corpus_path);
  const auto clusters = read_clusters_json(clusters_path);
  manifest.input("corpus.jsonl", file_digest(corpus_path));
  manifest.input("clusters.json", file_digest(clusters_path));

  GroupedMovies data;
  for (const auto& e : corpus) {
    const auto it = clusters.assignments.find(e.imdb_id);
    if (it == clusters.assignments.end()) continue;
    data.movies.push_back(e.movie);
    data.group_of[e.imdb_id] = clusters.labels[static_cast<std::size_t>(it->second)];
  }
  // Archetype columns in their canonical order, anything else after.
  std::vector<std::pair<std::size_t, std::string>> order;
  for (std::size_t c = 0; c < clusters.labels.size(); ++c) {
    const auto a = parse_archetype(clusters.labels[c]);
    order.emplace_back(a ? static_cast<std::size_t>(*a) : kArchetypes.size() + c, clusters.labels[c]);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [rank, label] : order) data.group_order.push_back(label);

  StatsReport report;
  try {
    report = manifest.stage("report", [&] { return build_stats_report(data); });
  } catch (const Error& e) {
    log.error(std::string("stats: ") + e.what());
    return kExitStatsInfeasible;
  }

  const auto& dir = config.output_dir;
  write_file(dir / "table1.csv", table1_csv(report));
  write_file(dir / "table2.csv", table2_csv(report));
  write_file(dir / "table3.csv", table3_csv(report));
  write_file(dir / "table4.csv", table4_csv(report));
  write_file(dir / "table5.csv", heat_csv(report.table5, report.groups, "budget"));
  write_file(dir / "table6.csv", heat_csv(report.table6, report.groups, "genre"));
  write_file(dir / "table5_detail.csv", heat_detail_csv(report.table5, "budget"));
  write_file(dir / "table6_detail.csv", heat_detail_csv(report.table6, "genre"));
  write_file(dir / "budget_tests.csv", budget_tests_csv(report));
  write_file(dir / "heatmap_legend.txt", heat_legend_text());

  const auto labels_of = [](const std::vector<HeatRow>& rows) {
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r.label);
    return out;
  };
  write_file(dir / "table5.svg", svg::heatmap(labels_of(report.table5), report.groups, heat_grid(report.table5),
                                              "Emotional arcs by production budget"));
  write_file(dir / "table6.svg", svg::heatmap(labels_of(report.table6), report.groups, heat_grid(report.table6),
                                              "Emotional arcs by genre"));
  manifest.count("movies", data.movies.size());
  manifest.write(dir);
  log.info("stats: " + std::to_string(data.movies.size()) + " movies in " + std::to_string(report.groups.size()) +
           " groups");
  return kExitOk;
}

} // namespace

// Config --------------------------------------------------------------------

void apply_config_text(PipelineConfig& config, std::string_view text, const fs::path& base_dir) {
  std::string section;
  std::size_t n = 0;
  std::size_t pos = 0;
  const auto path_of = [&](const std::string& v) {
    fs::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++n;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed table header", n);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "arc" && section != "cluster" && section != "filter")
        throw ParseError("unknown table [" + section + "]", n);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", n);
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    auto value_view = trim(line.substr(eq + 1));
    if (value_view.empty()) throw ParseError(key + ": missing value", n);
    const std::string value = value_view.front() == '"' || value_view.front() == '\''
                                  ? unquote(value_view, n)
                                  : std::string(value_view);

    if (key == "corpus_dir" || key == "corpus") config.corpus_dir = path_of(value);
    else if (key == "metadata_csv" || key == "metadata") config.metadata_csv = path_of(value);
    else if (key == "lexicon_path" || key == "lexicon") config.lexicon_path = path_of(value);
    else if (key == "manifest_csv" || key == "manifest") config.manifest_csv = path_of(value);
    else if (key == "output_dir" || key == "out") config.output_dir = path_of(value);
    else if (key == "raw_valence") config.write_raw_valence = as_bool(value, key, n);
    else if (key == "sweep_k") {
      config.sweep_k.clear();
      for (const auto& item : as_list(value)) config.sweep_k.push_back(positive(as_int(item, key, n), key, n));
    } else if (key == "arc.low_pass_size") config.arc.low_pass_size = positive(as_int(value, key, n), key, n);
    else if (key == "arc.output_length") {
      config.arc.output_length = as_int(value, key, n);
      if (config.arc.output_length < 2) throw ParseError(key + " must be at least 2", n);
    } else if (key == "arc.rescale_output") config.arc.rescale_output = as_bool(value, key, n);
    else if (key == "cluster.k") config.cluster.k = positive(as_int(value, key, n), key, n);
    else if (key == "cluster.seed") {
      const auto s = as_int(value, key, n);
      if (s < 0) throw ParseError(key + " must be nonnegative", n);
      config.cluster.seed = static_cast<std::uint64_t>(s);
    } else if (key == "cluster.max_iterations")
      config.cluster.max_iterations = static_cast<int>(positive(as_int(value, key, n), key, n));
    else if (key == "cluster.restarts") config.cluster.restarts = static_cast<int>(positive(as_int(value, key, n), key, n));
    else if (key == "cluster.tolerance") config.cluster.tolerance = as_double(value, key, n);
    else if (key == "filter.min_cleaned_chars") {
      config.filter.min_cleaned_chars = as_int(value, key, n);
      if (config.filter.min_cleaned_chars < 0) throw ParseError(key + " must be nonnegative", n);
    } else if (key == "filter.require_ranked_uploader") config.filter.require_ranked_uploader = as_bool(value, key, n);
    else if (key == "filter.require_domestic_revenue") config.filter.require_domestic_revenue = as_bool(value, key, n);
    else if (key == "filter.dedupe_by_download_count") config.filter.dedupe_by_download_count = as_bool(value, key, n);
    else if (key == "filter.dedupe_by_imdb_id") config.filter.dedupe_by_imdb_id = as_bool(value, key, n);
    else throw ParseError("unknown key '" + key + "'", n);
  }
}

void apply_config_file(PipelineConfig& config, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  try {
    apply_config_text(config, s.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Logging -------------------------------------------------------------------

LogLevel parse_log_level(std::string_view text) {
  const auto t = to_lower_ascii(trim(text));
  if (t == "quiet" || t == "0") return LogLevel::quiet;
  if (t == "error" || t == "1") return LogLevel::error;
  if (t == "warn" || t == "warning" || t == "2") return LogLevel::warn;
  if (t == "info" || t == "3") return LogLevel::info;
  if (t == "debug" || t == "4") return LogLevel::debug;
  throw std::invalid_argument("unknown log level '" + std::string(text) + "'");
}

Log::Log(LogLevel level, std::ostream* sink) : level_(level), sink_(sink ? sink : &std::cerr) {}

Log Log::from_env(std::ostream* sink) {
  LogLevel level = LogLevel::warn;
  if (const char* env = std::getenv("ARCMINER_LOG")) {
    try {
      level = parse_log_level(env);
    } catch (const std::invalid_argument&) {
    }
  }
  return Log(level, sink);
}

void Log::write(LogLevel level, std::string_view message) const {
  if (!enabled(level)) return;
  static constexpr const char* names[] = {"", "error", "warn", "info", "debug"};
  *sink_ << "arcminer: " << names[static_cast<int>(level)] << ": " << message << '\n';
}

// Commands ------------------------------------------------------------------

int cmd_ingest(const PipelineConfig& config, const Log& log) { return guarded(log, "ingest", ingest_body, config); }
int cmd_arcs(const PipelineConfig& config, const Log& log) { return guarded(log, "arcs", arcs_body, config); }
int cmd_cluster(const PipelineConfig& config, const Log& log) { return guarded(log, "cluster", cluster_body, config); }
int cmd_stats(const PipelineConfig& config, const Log& log) { return guarded(log, "stats", stats_body, config); }

int cmd_all(const PipelineConfig& config, const Log& log) {
  if (const int rc = cmd_ingest(config, log); rc != kExitOk) return rc;
  const int arcs_rc = cmd_arcs(config, log);
  if (arcs_rc != kExitOk && arcs_rc != kExitScoringFailures) return arcs_rc;
  if (const int rc = cmd_cluster(config, log); rc != kExitOk) return rc;
  if (const int rc = cmd_stats(config, log); rc != kExitOk) return rc;
  return arcs_rc;
}

std::vector<std::string> arc_csv_header(Eigen::Index output_length) {
  std::vector<std::string> out{"imdb_id"};
  char buf[24];
  for (Eigen::Index i = 0; i < output_length; ++i) {
    std::snprintf(buf, sizeof buf, "v%03ld", static_cast<long>(i));
    out.emplace_back(buf);
  }
  return out;
}

ArcSet read_arcs_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header || header->empty() || (*header)[0] != "imdb_id") throw ParseError("arcs header must start with imdb_id", 1);
  const auto width = static_cast<Eigen::Index>(header->size()) - 1;
  if (width < 2) throw ParseError("arcs need at least two points", 1);
  std::vector<std::vector<double>> cols;
  ArcSet out;
  while (auto row = reader.next()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (static_cast<Eigen::Index>(row->size()) != width + 1)
      throw ParseError("expected " + std::to_string(width + 1) + " fields", reader.line());
    std::vector<double> v;
    for (Eigen::Index i = 1; i <= width; ++i) {
      const auto& cell = (*row)[static_cast<std::size_t>(i)];
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) throw ParseError("bad arc value '" + cell + "'", reader.line());
      v.push_back(x);
    }
    out.ids.push_back((*row)[0]);
    cols.push_back(std::move(v));
  }
  out.values.resize(width, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    out.values.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(cols[c].data(), width);
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (const unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

} // namespace arcminer
