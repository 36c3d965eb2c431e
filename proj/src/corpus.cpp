#include "arcminer/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "arcminer/csv.hpp"
#include "arcminer/error.hpp"
#include "arcminer/text.hpp"

namespace arcminer {

namespace {

constexpr std::array<std::string_view, kGenreCount> kGenreNames = {
    "Action", "Horror", "SciFi",     "Mystery", "Thriller", "Animation", "Drama",   "Adventure",
    "Fantasy", "Crime", "Comedy",    "Romance", "Family",   "Biography", "Sport",   "Music",
    "War",    "Western", "History",  "Musical", "Film Noir", "News"};

std::string genre_key(std::string_view name) {
  std::string key;
  for (const char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return key;
}

std::optional<double> parse_real(std::string_view field, std::string_view column, std::size_t line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  double value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
    throw ParseError("column " + std::string(column) + ": not a number: '" + std::string(field) + "'", line);
  return value;
}

std::optional<std::uint64_t> parse_count(std::string_view field, std::string_view column, std::size_t line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError("column " + std::string(column) + ": not a nonnegative integer: '" + std::string(field) + "'",
                     line);
  return value;
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  const auto fail = [&] { return ParseError("release_date: expected YYYY-MM-DD, got '" + std::string(field) + "'", line); };
  if (field.size() != 10 || field[4] != '-' || field[7] != '-') throw fail();
  const auto num = [&](std::string_view s, auto& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail();
  };
  num(field.substr(0, 4), y);
  num(field.substr(5, 2), m);
  num(field.substr(8, 2), d);
  const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw fail();
  return date;
}

std::optional<std::string> parse_text(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  return std::string(field);
}

void require_range(const std::optional<double>& v, double lo, double hi, std::string_view column, std::size_t line) {
  if (v && (*v < lo || *v > hi)) {
    throw ParseError("column " + std::string(column) + ": value " + std::to_string(*v) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]",
                     line);
  }
}

// Maps header names to column positions; `required` must all be present.
std::unordered_map<std::string, std::size_t> index_header(const csv::Row& header,
                                                          const std::vector<std::string_view>& required) {
  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) columns.emplace(std::string(trim(header[i])), i);
  for (const auto name : required) {
    if (!columns.contains(std::string(name))) throw ParseError("missing required column '" + std::string(name) + "'", 1);
  }
  return columns;
}

bool is_blank_row(const csv::Row& row) { return row.size() == 1 && trim(row[0]).empty(); }

} // namespace

std::string_view to_string(UploaderRank rank) {
  switch (rank) {
    case UploaderRank::unranked: return "unranked";
    case UploaderRank::bronze: return "bronze";
    case UploaderRank::silver: return "silver";
    case UploaderRank::gold: return "gold";
    case UploaderRank::platinum: return "platinum";
  }
  return "unranked";
}

UploaderRank parse_uploader_rank(std::string_view text) {
  const std::string key = to_lower_ascii(trim(text));
  if (key.empty() || key == "unranked") return UploaderRank::unranked;
  if (key == "bronze") return UploaderRank::bronze;
  if (key == "silver") return UploaderRank::silver;
  if (key == "gold") return UploaderRank::gold;
  if (key == "platinum") return UploaderRank::platinum;
  throw Error("unknown uploader rank '" + std::string(text) + "'");
}

const std::array<Genre, kGenreCount>& all_genres() {
  static const auto genres = [] {
    std::array<Genre, kGenreCount> g{};
    for (std::size_t i = 0; i < kGenreCount; ++i) g[i] = static_cast<Genre>(i);
    return g;
  }();
  return genres;
}

std::string_view to_string(Genre genre) { return kGenreNames.at(static_cast<std::size_t>(genre)); }

Genre parse_genre(std::string_view name) {
  const std::string key = genre_key(name);
  for (std::size_t i = 0; i < kGenreCount; ++i) {
    if (genre_key(kGenreNames[i]) == key) return static_cast<Genre>(i);
  }
  std::string vocab;
  for (const auto g : kGenreNames) {
    if (!vocab.empty()) vocab += ", ";
    vocab += g;
  }
  throw Error("unknown genre '" + std::string(name) + "'; expected one of: " + vocab);
}

const std::vector<std::string>& numeric_field_names() {
  static const std::vector<std::string> names = {
      "domestic_gross", "worldwide_gross", "budget",      "imdb_rating",           "metascore",
      "rating_count",   "user_reviews",    "critic_reviews", "oscars_won",         "other_awards",
      "other_award_nominations",           "runtime_min"};
  return names;
}

std::optional<double> field_value(const MovieRecord& m, std::string_view field) {
  const auto count = [](const std::optional<std::uint64_t>& v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
  };
  if (field == "domestic_gross") return m.domestic_gross;
  if (field == "worldwide_gross") return m.worldwide_gross;
  if (field == "budget") return m.budget;
  if (field == "imdb_rating") return m.imdb_rating;
  if (field == "metascore") return m.metascore;
  if (field == "rating_count") return count(m.rating_count);
  if (field == "user_reviews") return count(m.user_reviews);
  if (field == "critic_reviews") return count(m.critic_reviews);
  if (field == "oscars_won") return count(m.oscars_won);
  if (field == "other_awards") return count(m.other_awards);
  if (field == "other_award_nominations") return count(m.other_award_nominations);
  if (field == "runtime_min") return m.runtime_min;
  throw std::invalid_argument("unknown movie field '" + std::string(field) + "'");
}

std::vector<MetadataRow> read_metadata_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw ParseError("metadata CSV is empty; a header row is required", 1);
  const auto cols = index_header(*header, {"imdb_id"});

  std::vector<MetadataRow> rows;
  while (auto row = reader.next()) {
    if (is_blank_row(*row)) continue;
    const std::size_t line = reader.line();
    const auto get = [&](const char* name) -> std::string_view {
      const auto it = cols.find(name);
      if (it == cols.end() || it->second >= row->size()) return {};
      return (*row)[it->second];
    };

    MetadataRow out;
    auto& m = out.movie;
    m.imdb_id = std::string(trim(get("imdb_id")));
    if (m.imdb_id.empty()) throw ParseError("empty imdb_id", line);
    m.title = std::string(trim(get("title")));
    m.release_date = parse_date(get("release_date"), line);
    m.domestic_gross = parse_real(get("domestic_gross"), "domestic_gross", line);
    m.worldwide_gross = parse_real(get("worldwide_gross"), "worldwide_gross", line);
    m.budget = parse_real(get("budget"), "budget", line);
    m.imdb_rating = parse_real(get("imdb_rating"), "imdb_rating", line);
    m.metascore = parse_real(get("metascore"), "metascore", line);
    m.rating_count = parse_count(get("rating_count"), "rating_count", line);
    m.user_reviews = parse_count(get("user_reviews"), "user_reviews", line);
    m.critic_reviews = parse_count(get("critic_reviews"), "critic_reviews", line);
    m.oscars_won = parse_count(get("oscars_won"), "oscars_won", line);
    m.other_awards = parse_count(get("other_awards"), "other_awards", line);
    m.other_award_nominations = parse_count(get("other_award_nominations"), "other_award_nominations", line);
    m.runtime_min = parse_real(get("runtime_min"), "runtime_min", line);
    m.director = parse_text(get("director"));
    m.age_rating = parse_text(get("age_rating"));

    constexpr double kInf = std::numeric_limits<double>::infinity();
    require_range(m.domestic_gross, 0, kInf, "domestic_gross", line);
    require_range(m.worldwide_gross, 0, kInf, "worldwide_gross", line);
    require_range(m.budget, 0, kInf, "budget", line);
    require_range(m.imdb_rating, 1, 10, "imdb_rating", line);
    require_range(m.metascore, 0, 100, "metascore", line);
    require_range(m.runtime_min, 0, kInf, "runtime_min", line);

    std::string_view genres = get("genres");
    while (!trim(genres).empty()) {
      const auto bar = genres.find('|');
      const auto name = trim(genres.substr(0, bar));
      if (!name.empty()) {
        try {
          m.genres.insert(parse_genre(name));
        } catch (const Error& e) {
          throw ParseError(e.what(), line);
        }
      }
      if (bar == std::string_view::npos) break;
      genres.remove_prefix(bar + 1);
    }

    if (const auto rank = trim(get("uploader_rank")); !rank.empty()) {
      try {
        out.uploader_rank = parse_uploader_rank(rank);
      } catch (const Error& e) {
        throw ParseError(e.what(), line);
      }
    }
    out.download_count = parse_count(get("download_count"), "download_count", line);
    rows.push_back(std::move(out));
  }
  return rows;
}

std::vector<MetadataRow> load_metadata_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open metadata file " + path.string());
  try {
    return read_metadata_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<MovieRecord> movies_of(const std::vector<MetadataRow>& rows) {
  std::vector<MovieRecord> movies;
  movies.reserve(rows.size());
  for (const auto& r : rows) movies.push_back(r.movie);
  return movies;
}

std::optional<std::string> find_duplicate_id(const std::vector<MovieRecord>& movies) {
  std::set<std::string_view> seen;
  for (const auto& m : movies) {
    if (!seen.insert(m.imdb_id).second) return m.imdb_id;
  }
  return std::nullopt;
}

std::vector<ManifestEntry> read_manifest_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) throw ParseError("manifest CSV is empty; a header row is required", 1);
  const auto cols = index_header(*header, {"file"});
  std::vector<ManifestEntry> entries;
  while (auto row = reader.next()) {
    if (is_blank_row(*row)) continue;
    const std::size_t line = reader.line();
    const auto get = [&](const char* name) -> std::string_view {
      const auto it = cols.find(name);
      if (it == cols.end() || it->second >= row->size()) return {};
      return (*row)[it->second];
    };
    ManifestEntry e;
    e.file = std::string(trim(get("file")));
    if (e.file.empty()) throw ParseError("empty file name", line);
    e.imdb_id = parse_text(get("imdb_id"));
    if (const auto rank = trim(get("uploader_rank")); !rank.empty()) {
      try {
        e.uploader_rank = parse_uploader_rank(rank);
      } catch (const Error& err) {
        throw ParseError(err.what(), line);
      }
    }
    e.download_count = parse_count(get("download_count"), "download_count", line);
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest file " + path.string());
  try {
    return read_manifest_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string FilterReport::to_csv() const {
  std::string out = "stage,count\n";
  for (const auto& [stage, count] : counts_after_each_stage) out += stage + "," + std::to_string(count) + "\n";
  return out;
}

FilterOutcome apply_quality_filters(std::vector<CorpusRecord> records, const std::vector<MovieRecord>& metadata,
                                    const FilterPolicy& policy) {
  if (policy.min_cleaned_chars < 0) throw std::invalid_argument("min_cleaned_chars must be nonnegative");

  std::stable_sort(records.begin(), records.end(), [](const CorpusRecord& a, const CorpusRecord& b) {
    return a.document.source_id < b.document.source_id;
  });

  FilterOutcome out;
  auto& report = out.report.counts_after_each_stage;
  report.emplace_back("input", records.size());

  const auto keep_if = [&records](auto&& pred) {
    std::erase_if(records, [&](const CorpusRecord& r) { return !pred(r); });
  };

  // Records without an imdb_id form their own group.
  if (policy.dedupe_by_download_count) {
    std::map<std::string, std::size_t> best;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto key = records[i].imdb_id ? "id:" + *records[i].imdb_id : "src:" + records[i].document.source_id;
      const auto [it, inserted] = best.emplace(key, i);
      if (!inserted && records[i].download_count > records[it->second].download_count) it->second = i;
    }
    std::vector<bool> keep(records.size(), false);
    for (const auto& [key, idx] : best) keep[idx] = true;
    std::vector<CorpusRecord> kept;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (keep[i]) kept.push_back(std::move(records[i]));
    }
    records = std::move(kept);
  }
  report.emplace_back("dedupe_download_count", records.size());

  if (policy.require_domestic_revenue) {
    std::set<std::string_view> with_revenue;
    for (const auto& m : metadata) {
      if (m.domestic_gross) with_revenue.insert(m.imdb_id);
    }
    keep_if([&](const CorpusRecord& r) { return r.imdb_id && with_revenue.contains(*r.imdb_id); });
  }
  report.emplace_back("domestic_revenue", records.size());

  if (policy.require_ranked_uploader) {
    keep_if([](const CorpusRecord& r) { return r.uploader_rank != UploaderRank::unranked; });
  }
  report.emplace_back("ranked_uploader", records.size());

  const auto min_chars = static_cast<std::size_t>(policy.min_cleaned_chars);
  keep_if([&](const CorpusRecord& r) { return r.document.cleaned_char_count >= min_chars; });
  report.emplace_back("min_cleaned_chars", records.size());

  if (policy.dedupe_by_imdb_id) {
    std::set<std::string> seen;
    keep_if([&](const CorpusRecord& r) { return !r.imdb_id || seen.insert(*r.imdb_id).second; });
  }
  report.emplace_back("dedupe_imdb_id", records.size());

  out.survivors = std::move(records);
  return out;
}

JoinResult join_metadata(const std::vector<CorpusRecord>& records, const std::vector<MovieRecord>& metadata) {
  std::map<std::string_view, const MovieRecord*> by_id;
  for (const auto& m : metadata) {
    if (!by_id.emplace(m.imdb_id, &m).second) throw Error("duplicate imdb_id in metadata: " + m.imdb_id);
  }
  JoinResult result;
  for (const auto& r : records) {
    const auto it = r.imdb_id ? by_id.find(*r.imdb_id) : by_id.end();
    if (it == by_id.end()) {
      result.unmatched.push_back(r.document.source_id);
    } else {
      result.pairs.push_back({r, *it->second});
    }
  }
  return result;
}

} // namespace arcminer
