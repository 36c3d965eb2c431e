#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arcminer/subtitle.hpp"

namespace arcminer {

enum class UploaderRank { unranked, bronze, silver, gold, platinum };

std::string_view to_string(UploaderRank rank);
// Case-insensitive; the empty string maps to unranked.
UploaderRank parse_uploader_rank(std::string_view text);

struct CorpusRecord {
  SubtitleDocument document;
  UploaderRank uploader_rank = UploaderRank::unranked;
  std::uint64_t download_count = 0;
  std::optional<std::string> imdb_id;
};

// IMDb genre vocabulary, in the order the genre heat map lists it.
enum class Genre {
  Action, Horror, SciFi, Mystery, Thriller, Animation, Drama, Adventure, Fantasy, Crime, Comedy,
  Romance, Family, Biography, Sport, Music, War, Western, History, Musical, FilmNoir, News
};
inline constexpr std::size_t kGenreCount = 22;
const std::array<Genre, kGenreCount>& all_genres();
std::string_view to_string(Genre genre);
// Accepts IMDb spellings ("Sci-Fi", "Film-Noir") by ignoring case and
// non-alphanumerics; throws Error listing the vocabulary otherwise.
Genre parse_genre(std::string_view name);

struct MovieRecord {
  std::string imdb_id;
  std::string title;
  std::optional<std::chrono::year_month_day> release_date;
  // Million USD.
  std::optional<double> domestic_gross;
  std::optional<double> worldwide_gross;
  std::optional<double> budget;
  std::optional<double> imdb_rating;  // [1, 10]
  std::optional<double> metascore;    // [0, 100]
  std::optional<std::uint64_t> rating_count;
  std::optional<std::uint64_t> user_reviews;
  std::optional<std::uint64_t> critic_reviews;
  std::optional<std::uint64_t> oscars_won;
  std::optional<std::uint64_t> other_awards;
  std::optional<std::uint64_t> other_award_nominations;
  std::optional<double> runtime_min;
  std::set<Genre> genres;
  std::optional<std::string> director;
  std::optional<std::string> age_rating;
};

// Numeric fields addressable by their metadata CSV column name.
const std::vector<std::string>& numeric_field_names();
// Throws std::invalid_argument for an unknown name.
std::optional<double> field_value(const MovieRecord& movie, std::string_view field);

// One metadata CSV row; the provenance columns describe the subtitle upload.
struct MetadataRow {
  MovieRecord movie;
  std::optional<UploaderRank> uploader_rank;
  std::optional<std::uint64_t> download_count;
};

std::vector<MetadataRow> read_metadata_csv(std::istream& in);
std::vector<MetadataRow> load_metadata_csv(const std::filesystem::path& path);
std::vector<MovieRecord> movies_of(const std::vector<MetadataRow>& rows);
std::optional<std::string> find_duplicate_id(const std::vector<MovieRecord>& movies);

// Optional file -> imdb_id mapping with per-upload provenance.
struct ManifestEntry {
  std::string file;
  std::optional<std::string> imdb_id;
  std::optional<UploaderRank> uploader_rank;
  std::optional<std::uint64_t> download_count;
};
std::vector<ManifestEntry> read_manifest_csv(std::istream& in);
std::vector<ManifestEntry> load_manifest_csv(const std::filesystem::path& path);

struct FilterPolicy {
  std::int64_t min_cleaned_chars = 10'000;
  bool require_ranked_uploader = true;
  bool require_domestic_revenue = true;
  bool dedupe_by_download_count = true;
  bool dedupe_by_imdb_id = true;
};

struct FilterReport {
  std::vector<std::pair<std::string, std::size_t>> counts_after_each_stage;

  std::string to_csv() const;
};

struct FilterOutcome {
  std::vector<CorpusRecord> survivors;  // ordered by source_id
  FilterReport report;
};

// Quality cascade: input, download-count dedupe, domestic revenue present,
// ranked uploader, minimum cleaned length, imdb_id dedupe. Disabled stages
// still report a row so reports stay comparable.
FilterOutcome apply_quality_filters(std::vector<CorpusRecord> records, const std::vector<MovieRecord>& metadata,
                                    const FilterPolicy& policy);

struct JoinedRecord {
  CorpusRecord record;
  MovieRecord movie;
};

struct JoinResult {
  std::vector<JoinedRecord> pairs;
  std::vector<std::string> unmatched;  // source ids
};

// Inner join on imdb_id. Throws Error naming the id if metadata repeats one.
JoinResult join_metadata(const std::vector<CorpusRecord>& records, const std::vector<MovieRecord>& metadata);

} // namespace arcminer
