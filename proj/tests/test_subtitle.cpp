#include <doctest.h>

#include <string>

#include "arcminer/error.hpp"
#include "arcminer/subtitle.hpp"

using arcminer::parse_srt;

TEST_CASE("single cue") {
  const auto r = parse_srt("1\n00:00:01,000 --> 00:00:02,000\nHello!\n\n");
  REQUIRE(r.document.cues.size() == 1);
  const auto& c = r.document.cues[0];
  CHECK(c.index == 1);
  CHECK(c.start_ms == 1000);
  CHECK(c.end_ms == 2000);
  CHECK(c.text == "Hello!");
  CHECK(r.warnings.empty());
  CHECK(r.document.cleaned_char_count == 6);
}

TEST_CASE("markup is stripped") {
  CHECK(parse_srt("1\n00:00:01,000 --> 00:00:02,000\n<i>Run!</i>\n\n").document.cues[0].text == "Run!");
  CHECK(parse_srt("1\n00:00:01,000 --> 00:00:02,000\n{\\an8}<font color=\"red\">Up</font>\n").document.cues[0].text ==
        "Up");
}

TEST_CASE("cues are re-sorted by start time") {
  const auto r = parse_srt("1\n00:00:05,000 --> 00:00:06,000\nSecond\n\n2\n00:00:01,000 --> 00:00:02,000\nFirst\n\n");
  REQUIRE(r.document.cues.size() == 2);
  CHECK(r.document.cues[0].text == "First");
  CHECK(r.document.cues[1].text == "Second");
}

TEST_CASE("BOM, CRLF, multi-line text and dotted milliseconds") {
  const auto r = parse_srt("\xef\xbb\xbf" "1\r\n00:01:02.500 --> 00:01:03.250 X1:10\r\nOne\r\nTwo\r\n\r\n");
  REQUIRE(r.document.cues.size() == 1);
  CHECK(r.document.cues[0].start_ms == 62500);
  CHECK(r.document.cues[0].end_ms == 63250);
  CHECK(r.document.cues[0].text == "One\nTwo");
}

TEST_CASE("malformed timestamps skip the cue with a warning") {
  const auto r = parse_srt(
      "1\n00:00:01,000 --> 00:00:02,000\nKeep\n\n2\n00:00:99,000 --> 00:00:03,000\nDrop\n\n"
      "3\n00:00:05,000 --> 00:00:04,000\nBackwards\n\n4\n00:00:06,000 --> 00:00:07,000\nAlso keep\n");
  REQUIRE(r.document.cues.size() == 2);
  CHECK(r.document.cues[0].text == "Keep");
  CHECK(r.document.cues[1].text == "Also keep");
  CHECK(r.warnings.size() >= 2);
}

TEST_CASE("no parseable cue is a document error") {
  CHECK_THROWS_AS(parse_srt(""), arcminer::ParseError);
  CHECK_THROWS_AS(parse_srt("just some text\nwithout timing\n"), arcminer::ParseError);
}

TEST_CASE("cue text never contains an arrow or timing line") {
  const auto r = parse_srt(
      "1\n00:00:01,000 --> 00:00:02,000\na --> b\n--<b>></b> c\n\n2\n00:00:03,000 --> 00:00:04,000\nnext\n");
  for (const auto& c : r.document.cues) {
    CHECK(c.text.find("-->") == std::string::npos);
    CHECK(c.text.find("00:00") == std::string::npos);
  }
  for (const auto& c : r.document.cues) CHECK(c.start_ms <= c.end_ms);
}

TEST_CASE("a missing blank separator still starts a new cue") {
  const auto r = parse_srt("1\n00:00:01,000 --> 00:00:02,000\nA\n2\n00:00:03,000 --> 00:00:04,000\nB\n");
  REQUIRE(r.document.cues.size() == 2);
  CHECK(r.document.cues[0].text == "A");
  CHECK(r.document.cues[1].index == 2);
}
