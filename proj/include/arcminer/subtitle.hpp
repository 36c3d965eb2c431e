#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arcminer {

struct SubtitleCue {
  std::uint32_t index = 1;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;  // markup stripped; multi-line cues joined with '\n'
};

struct SubtitleDocument {
  std::string source_id;
  std::vector<SubtitleCue> cues;  // sorted by start_ms
  std::size_t cleaned_char_count = 0;
};

struct SrtParseResult {
  SubtitleDocument document;
  std::vector<std::string> warnings;  // one per skipped cue or stray line
};

// Parses SubRip content. Malformed cues are skipped with a warning; a file
// with no parseable cue throws ParseError.
SrtParseResult parse_srt(std::string_view raw, std::string source_id = {});

// Removes <...> and {...} markup spans.
std::string strip_markup(std::string_view text);

// Sum of clean_text() lengths over all cue texts.
std::size_t cleaned_char_count(const std::vector<SubtitleCue>& cues);

// Restores the sort and character-count invariants after cues are edited.
void normalize(SubtitleDocument& doc);

} // namespace arcminer
