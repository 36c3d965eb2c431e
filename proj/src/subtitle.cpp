#include "arcminer/subtitle.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "arcminer/error.hpp"
#include "arcminer/text.hpp"

namespace arcminer {

namespace {

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    auto line = s.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

std::optional<std::uint32_t> parse_index(std::string_view line) {
  line = trim(line);
  if (line.empty()) return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
  if (ec != std::errc{} || ptr != line.data() + line.size()) return std::nullopt;
  return value;
}

bool is_arrow_line(std::string_view line) { return line.find("-->") != std::string_view::npos; }

// HH:MM:SS,mmm (a '.' separator is accepted; hours may exceed two digits).
std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  s = trim(s);
  int fields[4] = {0, 0, 0, 0};
  std::size_t digits[4] = {0, 0, 0, 0};
  int part = 0;
  for (const char c : s) {
    if (c >= '0' && c <= '9') {
      if (digits[part] >= 9) return std::nullopt;
      fields[part] = fields[part] * 10 + (c - '0');
      ++digits[part];
    } else if (c == ':' && part < 2) {
      ++part;
    } else if ((c == ',' || c == '.') && part == 2) {
      ++part;
    } else {
      return std::nullopt;
    }
  }
  if (part != 3) return std::nullopt;
  if (digits[0] == 0 || digits[1] != 2 || digits[2] != 2 || digits[3] == 0 || digits[3] > 3)
    return std::nullopt;
  if (fields[1] >= 60 || fields[2] >= 60) return std::nullopt;
  int ms = fields[3];
  for (std::size_t d = digits[3]; d < 3; ++d) ms *= 10;
  return ((static_cast<std::int64_t>(fields[0]) * 60 + fields[1]) * 60 + fields[2]) * 1000 + ms;
}

struct Timing {
  std::int64_t start_ms;
  std::int64_t end_ms;
};

std::optional<Timing> parse_timing_line(std::string_view line) {
  const auto arrow = line.find("-->");
  const auto start = parse_timestamp(line.substr(0, arrow));
  auto rest = trim(line.substr(arrow + 3));
  // Trailing positioning hints ("X1:100 X2:200 ...") follow the end time.
  rest = rest.substr(0, rest.find_first_of(" \t"));
  const auto end = parse_timestamp(rest);
  if (!start || !end || *start > *end) return std::nullopt;
  return Timing{*start, *end};
}

} // namespace

std::string strip_markup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '<' || c == '{') {
      const char close = (c == '<') ? '>' : '}';
      const auto j = text.find(close, i + 1);
      if (j != std::string_view::npos) {
        i = j + 1;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

std::size_t cleaned_char_count(const std::vector<SubtitleCue>& cues) {
  std::size_t total = 0;
  for (const auto& cue : cues) total += clean_text(cue.text).size();
  return total;
}

void normalize(SubtitleDocument& doc) {
  std::stable_sort(doc.cues.begin(), doc.cues.end(),
                   [](const SubtitleCue& a, const SubtitleCue& b) { return a.start_ms < b.start_ms; });
  doc.cleaned_char_count = cleaned_char_count(doc.cues);
}

SrtParseResult parse_srt(std::string_view raw, std::string source_id) {
  const std::string decoded = sanitize_utf8(raw);
  const auto lines = split_lines(decoded);

  SrtParseResult result;
  result.document.source_id = std::move(source_id);
  auto& warnings = result.warnings;

  // A cue header is either "index\nHH:MM:SS,mmm --> ..." or a bare arrow line.
  const auto header_at = [&](std::size_t i) -> std::size_t {
    if (i >= lines.size()) return 0;
    if (is_arrow_line(lines[i])) return 1;
    if (i + 1 < lines.size() && parse_index(lines[i]) && is_arrow_line(lines[i + 1])) return 2;
    return 0;
  };

  std::size_t i = 0;
  std::uint32_t sequence = 0;
  while (i < lines.size()) {
    if (is_blank(lines[i])) {
      ++i;
      continue;
    }
    const std::size_t header = header_at(i);
    if (header == 0) {
      warnings.push_back("line " + std::to_string(i + 1) + ": stray text outside a cue");
      ++i;
      continue;
    }
    ++sequence;
    const std::uint32_t index = header == 2 ? parse_index(lines[i]).value_or(0) : 0;
    const std::size_t timing_line = i + header - 1;
    const auto timing = parse_timing_line(lines[timing_line]);
    i = timing_line + 1;

    std::vector<std::string> text_lines;
    while (i < lines.size() && !is_blank(lines[i]) && header_at(i) == 0) {
      std::string text = strip_markup(lines[i]);
      // Markup removal can splice an arrow together ("--<b>>").
      for (auto at = text.find("-->"); at != std::string::npos; at = text.find("-->")) text.replace(at, 3, " ");
      text_lines.emplace_back(trim(text));
      ++i;
    }

    if (!timing) {
      warnings.push_back("line " + std::to_string(timing_line + 1) + ": malformed timestamp, cue skipped");
      continue;
    }
    SubtitleCue cue;
    cue.index = index >= 1 ? index : sequence;
    cue.start_ms = timing->start_ms;
    cue.end_ms = timing->end_ms;
    for (const auto& t : text_lines) {
      if (t.empty()) continue;
      if (!cue.text.empty()) cue.text += '\n';
      cue.text += t;
    }
    result.document.cues.push_back(std::move(cue));
  }

  if (result.document.cues.empty()) {
    throw ParseError("no parseable subtitle cues" +
                     (result.document.source_id.empty() ? std::string{} : " in " + result.document.source_id));
  }
  normalize(result.document);
  return result;
}

} // namespace arcminer
