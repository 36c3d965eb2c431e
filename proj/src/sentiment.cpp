#include "arcminer/sentiment.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "arcminer/error.hpp"
#include "arcminer/text.hpp"

namespace arcminer {

namespace {

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";
constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr std::string_view kEmDash = "\xE2\x80\x94";

bool valid_key(std::string_view word) {
  if (word.empty()) return false;
  for (const char c : word) {
    if (!is_kept_char(c) || (c >= 'A' && c <= 'Z')) return false;
  }
  return true;
}

// Length of the sentence terminator at s[i], or 0.
std::size_t terminator_at(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c == '.' || c == '?' || c == '!') return 1;
  if (s.substr(i, kEllipsis.size()) == kEllipsis) return kEllipsis.size();
  return 0;
}

bool opens_speaker_turn(std::string_view line) {
  line = trim(line);
  return line.starts_with('-') || line.starts_with(kEnDash) || line.starts_with(kEmDash);
}

} // namespace

void Lexicon::set(std::string_view word, Valence valence) { entries_[to_lower_ascii(word)] = valence; }

int Lexicon::valence(std::string_view lowercase_word) const {
  const auto it = entries_.find(std::string(lowercase_word));
  return it == entries_.end() ? 0 : static_cast<int>(it->second);
}

bool Lexicon::contains(std::string_view word) const { return entries_.contains(to_lower_ascii(word)); }

LexiconLoad read_lexicon(std::istream& in) {
  LexiconLoad out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected word<TAB>value", line_no);
    const std::string word = to_lower_ascii(trim(view.substr(0, tab)));
    const auto value_text = trim(view.substr(tab + 1));
    double value = 0;
    auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (value_text.empty() || ec != std::errc{} || ptr != value_text.data() + value_text.size() ||
        !std::isfinite(value))
      throw ParseError("unparsable valence '" + std::string(value_text) + "'", line_no);
    if (!valid_key(word)) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": '" + word +
                             "' cannot match a cleaned token, skipped");
      continue;
    }
    if (out.lexicon.contains(word)) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate word '" + word + "', last entry wins");
    }
    const Valence v = value > 0 ? Valence::positive : value < 0 ? Valence::negative : Valence::neutral;
    out.lexicon.set(word, v);
  }
  return out;
}

LexiconLoad load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon file " + path.string());
  try {
    return read_lexicon(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> segment_sentences(const SubtitleDocument& document) {
  std::vector<std::string> sentences;
  std::string buffer;
  const auto flush = [&] {
    auto cleaned = clean_text(buffer);
    if (!cleaned.empty()) sentences.push_back(std::move(cleaned));
    buffer.clear();
  };

  for (const auto& cue : document.cues) {
    std::string_view text = cue.text;
    while (true) {
      const auto nl = text.find('\n');
      const std::string_view line = text.substr(0, nl);
      if (opens_speaker_turn(line)) flush();
      if (!buffer.empty()) buffer += ' ';
      std::size_t i = 0;
      while (i < line.size()) {
        if (terminator_at(line, i) == 0) {
          buffer += line[i++];
          continue;
        }
        // "?!", "..." and similar runs end a single sentence.
        while (i < line.size()) {
          const std::size_t len = terminator_at(line, i);
          if (len == 0) break;
          buffer.append(line.substr(i, len));
          i += len;
        }
        flush();
      }
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
  }
  flush();
  return sentences;
}

double score_sentence(std::string_view sentence, const Lexicon& lexicon) {
  double total = 0;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    const std::size_t begin = i;
    while (i < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::string_view token = sentence.substr(begin, i - begin);
    while (!token.empty() && (token.front() == '?' || token.front() == '!')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == '?' || token.back() == '!')) token.remove_suffix(1);
    if (!token.empty()) total += lexicon.valence(to_lower_ascii(token));
  }
  return total;
}

Eigen::VectorXd scale_to_unit(const Eigen::Ref<const Eigen::VectorXd>& raw) {
  const double peak = raw.size() ? raw.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return Eigen::VectorXd::Zero(raw.size());
  return raw / peak;
}

RawValenceSeries score_document(const SubtitleDocument& document, const Lexicon& lexicon) {
  const auto sentences = segment_sentences(document);
  if (sentences.empty()) throw Error("empty document after cleaning");
  Eigen::VectorXd raw(static_cast<Eigen::Index>(sentences.size()));
  for (std::size_t i = 0; i < sentences.size(); ++i) raw[static_cast<Eigen::Index>(i)] = score_sentence(sentences[i], lexicon);
  return {scale_to_unit(raw), sentences.size()};
}

} // namespace arcminer
