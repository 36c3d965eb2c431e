#include "arcminer/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arcminer/csv.hpp"
#include "arcminer/error.hpp"
#include "arcminer/text.hpp"

namespace arcminer::synthetic {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kPositive = {"happy", "love", "joy", "wonderful", "great", "good",
                                            "smile", "hope", "win", "beautiful", "friend", "safe"};
const std::vector<std::string> kNegative = {"sad", "hate", "fear", "terrible", "bad", "cry",
                                            "lose", "angry", "death", "pain", "alone", "hurt"};
const std::vector<std::string> kNeutral = {"the",  "we",    "went", "to",     "house", "and",  "then",  "said",
                                           "it",   "was",   "there", "a",     "car",   "street", "door", "morning",
                                           "they", "table", "window", "walked", "across", "road", "city", "night"};

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

std::string timestamp(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3'600'000),
                static_cast<long long>(ms / 60'000 % 60), static_cast<long long>(ms / 1000 % 60),
                static_cast<long long>(ms % 1000));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

} // namespace

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  return r * std::cos(2.0 * kPi * u2);
}

Eigen::VectorXd archetype_template(Archetype archetype, Eigen::Index n) {
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, 1.0);
  switch (archetype) {
    case Archetype::RagsToRiches: return (2.0 * t - 1.0).matrix();
    case Archetype::RichesToRags: return (1.0 - 2.0 * t).matrix();
    case Archetype::ManInAHole: return (2.0 * kPi * t).cos().matrix();
    case Archetype::Icarus: return (-(2.0 * kPi * t).cos()).matrix();
    case Archetype::Cinderella: return (-(3.0 * kPi * t).cos()).matrix();
    case Archetype::Oedipus: return (3.0 * kPi * t).cos().matrix();
  }
  return Eigen::VectorXd::Zero(n);
}

LabelledArcs archetype_arcs(int per_archetype, double noise_sigma, std::uint64_t seed, Eigen::Index raw_length,
                            const ArcConfig& config) {
  Rng rng(seed);
  LabelledArcs out;
  const auto total = static_cast<Eigen::Index>(per_archetype) * static_cast<Eigen::Index>(kArchetypes.size());
  out.arcs.values.resize(config.output_length, total);
  Eigen::Index col = 0;
  for (const auto a : kArchetypes) {
    const Eigen::VectorXd base = archetype_template(a, raw_length);
    for (int i = 0; i < per_archetype; ++i) {
      Eigen::VectorXd raw = base;
      for (Eigen::Index j = 0; j < raw.size(); ++j) raw[j] += noise_sigma * rng.normal();
      out.arcs.values.col(col) = compute_arc(raw, config).values;
      char id[48];
      std::snprintf(id, sizeof id, "%s-%03d", std::string(identifier(a)).c_str(), i);
      out.arcs.ids.emplace_back(id);
      out.truth.push_back(a);
      ++col;
    }
  }
  return out;
}

std::string lexicon_tsv() {
  std::string out = "# synthetic polarity lexicon\n";
  for (const auto& w : kPositive) out += w + "\t1\n";
  for (const auto& w : kNegative) out += w + "\t-1\n";
  return out;
}

std::string script_srt(Archetype archetype, Rng& rng, const ScriptOptions& options) {
  const int n = std::max(options.sentences, 2);
  const Eigen::VectorXd shape = archetype_template(archetype, n);
  std::ostringstream srt;
  std::int64_t clock = 1000;
  std::uint32_t index = 1;
  const auto emit = [&](const std::string& text) {
    srt << index++ << "\n" << timestamp(clock) << " --> " << timestamp(clock + 1800) << "\n" << text << "\n\n";
    clock += 2000;
  };

  for (int i = 0; i < n; ++i) {
    const double v = std::clamp(shape[i] + options.noise * rng.normal(), -1.0, 1.0);
    std::vector<std::string> words;
    for (int w = 0; w < 5; ++w) words.push_back(pick(kNeutral, rng));
    for (int w = 0; w < 3; ++w) {
      const bool positive = rng.uniform() < (1.0 + v) / 2.0;
      const auto pos = static_cast<std::size_t>(rng.below(words.size() + 1));
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), pick(positive ? kPositive : kNegative, rng));
    }
    words.front()[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words.front()[0])));
    const double style = rng.uniform();
    const char* end = style < 0.7 ? "." : style < 0.85 ? "!" : "?";

    if (style < 0.1) {
      // Sentence spread over two cues.
      std::string first, second;
      for (std::size_t w = 0; w < words.size(); ++w) (w < words.size() / 2 ? first : second) += (w ? " " : "") + words[w];
      emit(first);
      emit(std::string(trim(second)) + end);
    } else {
      std::string text;
      for (std::size_t w = 0; w < words.size(); ++w) text += (w ? " " : "") + words[w];
      text += end;
      if (style > 0.95) text = "<i>" + text + "</i>";
      emit(text);
    }
  }
  return srt.str();
}

CorpusPaths write_corpus(const std::filesystem::path& root, const CorpusSpec& spec) {
  CorpusPaths paths{root / "corpus", root / "metadata.csv", root / "manifest.csv", root / "lexicon.tsv"};
  std::filesystem::create_directories(paths.corpus_dir);
  Rng rng(spec.seed);

  std::string manifest = "file,imdb_id,uploader_rank,download_count\n";
  for (const auto& f : spec.files) {
    ScriptOptions options;
    options.sentences = f.sentences;
    write_file(paths.corpus_dir / (f.stem + ".srt"), script_srt(f.archetype, rng, options));
    manifest += csv::join({f.stem + ".srt", f.imdb_id.value_or(""), std::string(to_string(f.rank)),
                           std::to_string(f.downloads)}) +
                "\n";
  }
  write_file(paths.manifest_csv, manifest);

  std::string meta =
      "imdb_id,title,release_date,domestic_gross,worldwide_gross,budget,imdb_rating,metascore,rating_count,"
      "user_reviews,critic_reviews,oscars_won,other_awards,other_award_nominations,runtime_min,genres,director,"
      "age_rating,uploader_rank,download_count\n";
  int serial = 0;
  for (const auto& m : spec.movies) {
    ++serial;
    const double lift = m.archetype == Archetype::ManInAHole ? 1.3 : 1.0;
    const double domestic = lift * std::exp(2.5 + 0.9 * rng.normal());
    const bool has_budget = rng.uniform() < 0.7;
    const double budget = std::exp(3.0 + 0.8 * rng.normal());
    const double worldwide = domestic * (1.5 + rng.uniform());
    const double rating = std::clamp(6.5 + 0.9 * rng.normal(), 1.0, 10.0);
    const double metascore = std::clamp(56.0 + 17.0 * rng.normal(), 0.0, 100.0);
    const auto rating_count = static_cast<std::uint64_t>(std::exp(10.0 + 1.2 * rng.normal()));
    std::vector<std::string> genres;
    const auto genre_count = 1 + rng.below(3);
    for (std::uint64_t g = 0; g < genre_count; ++g) {
      const auto name = std::string(to_string(all_genres()[rng.below(kGenreCount - 1)]));
      if (std::find(genres.begin(), genres.end(), name) == genres.end()) genres.push_back(name);
    }
    std::string genre_field;
    for (const auto& g : genres) genre_field += (genre_field.empty() ? "" : "|") + g;
    char date[16];
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", 1990 + serial % 30, 1 + serial % 12, 1 + serial % 28);

    meta += csv::join({m.imdb_id,
                       "Synthetic Movie " + std::to_string(serial),
                       date,
                       m.has_domestic ? csv::format_fixed(domestic, 4) : "",
                       csv::format_fixed(worldwide, 4),
                       has_budget ? csv::format_fixed(budget, 4) : "",
                       csv::format_fixed(rating, 1),
                       csv::format_fixed(metascore, 0),
                       std::to_string(rating_count),
                       std::to_string(rating_count / 300 + rng.below(50)),
                       std::to_string(rating_count / 600 + rng.below(30)),
                       std::to_string(rng.uniform() < 0.15 ? 1 + rng.below(3) : 0),
                       std::to_string(rng.below(20)),
                       std::to_string(rng.below(40)),
                       std::to_string(85 + rng.below(60)),
                       genre_field,
                       "Director " + std::to_string(1 + rng.below(40)),
                       serial % 2 ? "PG-13" : "R",
                       "",
                       ""}) +
            "\n";
  }
  write_file(paths.metadata_csv, meta);
  write_file(paths.lexicon_tsv, lexicon_tsv());
  return paths;
}

CorpusSpec demo_corpus(int movies, std::uint64_t seed) {
  CorpusSpec spec;
  spec.seed = seed;
  const auto id_of = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "tt%07d", i);
    return std::string(buf);
  };
  constexpr UploaderRank ranks[] = {UploaderRank::bronze, UploaderRank::silver, UploaderRank::gold, UploaderRank::platinum};
  for (int i = 1; i <= movies; ++i) {
    const auto a = kArchetypes[static_cast<std::size_t>(i - 1) % kArchetypes.size()];
    char stem[32];
    std::snprintf(stem, sizeof stem, "film%03d", i);
    spec.files.push_back({stem, id_of(i), a, 320, ranks[(i - 1) % 4], 100 + static_cast<std::uint64_t>(i)});
    spec.movies.push_back({id_of(i), a, true});
  }
  // Planted rejects, one per cascade stage.
  spec.files.push_back({"film001_alt", id_of(1), kArchetypes[0], 320, UploaderRank::gold, 10});
  spec.files.push_back({"nometa", id_of(movies + 1), Archetype::Icarus, 320, UploaderRank::gold, 50});
  spec.files.push_back({"unranked", id_of(movies + 2), Archetype::Oedipus, 320, UploaderRank::unranked, 50});
  spec.files.push_back({"short", id_of(movies + 3), Archetype::Cinderella, 60, UploaderRank::silver, 50});
  spec.movies.push_back({id_of(movies + 1), Archetype::Icarus, false});
  spec.movies.push_back({id_of(movies + 2), Archetype::Oedipus, true});
  spec.movies.push_back({id_of(movies + 3), Archetype::Cinderella, true});
  return spec;
}

} // namespace arcminer::synthetic
