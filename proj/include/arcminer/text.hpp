#pragma once

#include <string>
#include <string_view>

namespace arcminer {

// Replaces invalid UTF-8 sequences with U+FFFD and drops a leading BOM.
std::string sanitize_utf8(std::string_view raw);

// Keeps only [A-Za-z'?!]; every other character becomes a space, whitespace
// runs collapse to one space, and the result is trimmed. Idempotent.
std::string clean_text(std::string_view text);

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);

inline bool is_kept_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '\'' || c == '?' || c == '!';
}

} // namespace arcminer
