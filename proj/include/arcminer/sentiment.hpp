#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "arcminer/subtitle.hpp"

namespace arcminer {

// Ternary word valence.
enum class Valence : std::int8_t { negative = -1, neutral = 0, positive = 1 };

class Lexicon {
public:
  Lexicon() = default;

  // Lowercases the word; the last insert for a word wins.
  void set(std::string_view word, Valence valence);
  // 0 for words not in the lexicon.
  int valence(std::string_view lowercase_word) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(std::string_view word) const;

private:
  std::unordered_map<std::string, Valence> entries_;
};

struct LexiconLoad {
  Lexicon lexicon;
  std::vector<std::string> warnings;
};

// TSV "word<TAB>value"; '#' comment lines and blank lines are ignored.
// Real values are ternarized by sign. Throws ParseError with the line number.
LexiconLoad read_lexicon(std::istream& in);
LexiconLoad load_lexicon(const std::filesystem::path& path);

// Splits on '.', '?', '!' and U+2026 in the original cue text. A cue that
// ends without terminal punctuation continues into the next cue unless that
// cue opens a new speaker line with a dash. Sentences are returned cleaned.
std::vector<std::string> segment_sentences(const SubtitleDocument& document);

// Sum of token valences over a cleaned sentence.
double score_sentence(std::string_view sentence, const Lexicon& lexicon);

struct RawValenceSeries {
  Eigen::VectorXd values;  // in [-1, 1]
  std::size_t sentence_count = 0;
};

// Divides by the largest absolute entry; an all-zero input stays zero.
Eigen::VectorXd scale_to_unit(const Eigen::Ref<const Eigen::VectorXd>& raw);

// Throws Error("empty document after cleaning") when no sentence survives.
RawValenceSeries score_document(const SubtitleDocument& document, const Lexicon& lexicon);

} // namespace arcminer
