#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "arcminer/error.hpp"
#include "arcminer/sentiment.hpp"
#include "arcminer/subtitle.hpp"

using namespace arcminer;

namespace {

LexiconLoad lex(const std::string& tsv) {
  std::istringstream in(tsv);
  return read_lexicon(in);
}

SubtitleDocument doc(std::vector<std::string> texts) {
  SubtitleDocument d;
  std::int64_t t = 0;
  std::uint32_t i = 1;
  for (auto& s : texts) {
    d.cues.push_back({i++, t, t + 500, std::move(s)});
    t += 1000;
  }
  normalize(d);
  return d;
}

} // namespace

TEST_CASE("lexicon loading") {
  const auto a = lex("good\t1\nbad\t-1\n");
  CHECK(a.lexicon.size() == 2);
  CHECK(a.lexicon.valence("good") == 1);
  CHECK(a.lexicon.valence("bad") == -1);

  CHECK(lex("superb\t0.75\n").lexicon.valence("superb") == 1);
  CHECK(lex("meh\t0\n").lexicon.valence("meh") == 0);
  CHECK(lex("awful\t-2.5\n").lexicon.valence("awful") == -1);

  const auto dup = lex("Good\t1\ngood\t-1\n");
  CHECK(dup.lexicon.size() == 1);
  CHECK(dup.lexicon.valence("good") == -1);
  CHECK(dup.warnings.size() == 1);

  const auto commented = lex("# header\n\nhope\t1\n  # indented comment\n");
  CHECK(commented.lexicon.size() == 1);
}

TEST_CASE("lexicon errors report the line") {
  try {
    lex("good\t1\nbad\tnope\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(lex("missingtab\n"), ParseError);
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.tsv"), Error);
}

TEST_CASE("sentence segmentation") {
  CHECK(segment_sentences(doc({"Stop! Who goes there?"})) == std::vector<std::string>{"Stop!", "Who goes there?"});
  CHECK(segment_sentences(doc({"I think", "we should go."})) == std::vector<std::string>{"I think we should go"});
  CHECK(segment_sentences(doc({"..."})).empty());
  CHECK(segment_sentences(doc({"Wait\xe2\x80\xa6 what?!"})) == std::vector<std::string>{"Wait", "what?!"});
  CHECK(segment_sentences(doc({"I was going", "- Who are you"})) == std::vector<std::string>{"I was going", "Who are you"});
  CHECK(segment_sentences(doc({"- Hi\n- Hello there"})) == std::vector<std::string>{"Hi", "Hello there"});
  CHECK(segment_sentences(doc({"No. 5 is 3.5 km"})) == std::vector<std::string>{"No", "is", "km"});
}

TEST_CASE("sentence scoring") {
  Lexicon l;
  l.set("good", Valence::positive);
  l.set("bad", Valence::negative);
  CHECK(score_sentence("good good bad", l) == 1.0);
  CHECK(score_sentence("the quick fox", l) == 0.0);
  CHECK(score_sentence("bad!", l) == -1.0);
  CHECK(score_sentence("Good?! BAD", l) == 0.0);
  CHECK(score_sentence("", l) == 0.0);
}

TEST_CASE("unit scaling") {
  const auto s = [](std::vector<double> v) {
    return scale_to_unit(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  CHECK(s({2, -4, 1}).isApprox(Eigen::Vector3d(0.5, -1.0, 0.25)));
  CHECK(s({0, 0}).isZero(0));
  CHECK(s({3})[0] == 1.0);
}

TEST_CASE("document scoring") {
  Lexicon l;
  l.set("good", Valence::positive);
  l.set("bad", Valence::negative);
  const auto r = score_document(doc({"good good. bad bad bad bad.", "good"}), l);
  REQUIRE(r.sentence_count == 3);
  CHECK(r.values[0] == 0.5);
  CHECK(r.values[1] == -1.0);
  CHECK(r.values[2] == 0.25);

  try {
    score_document(doc({"...", "123"}), l);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "empty document after cleaning");
  }
}

TEST_CASE("scoring properties") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"good", "bad", "fine", "awful", "the", "a", "run", "joy"};
  Lexicon l;
  l.set("good", Valence::positive);
  l.set("fine", Valence::positive);
  l.set("joy", Valence::positive);
  l.set("bad", Valence::negative);
  l.set("awful", Valence::negative);
  const Lexicon empty;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> cues;
    std::vector<std::string> tokens;
    for (int s = 0; s < 12; ++s) {
      std::string sentence;
      for (int w = 0; w < 6; ++w) {
        const auto& word = words[rng() % words.size()];
        sentence += (w ? " " : "") + word;
        if (s == 0) tokens.push_back(word);
      }
      cues.push_back(sentence + ".");
    }
    const auto d = doc(cues);
    const auto sentences = segment_sentences(d);
    Eigen::VectorXd raw(static_cast<Eigen::Index>(sentences.size()));
    for (std::size_t i = 0; i < sentences.size(); ++i) raw[static_cast<Eigen::Index>(i)] = score_sentence(sentences[i], l);
    const auto scored = score_document(d, l);
    for (Eigen::Index i = 0; i < raw.size(); ++i) CHECK((scored.values[i] > 0) == (raw[i] > 0));
    for (Eigen::Index i = 0; i < raw.size(); ++i) CHECK((scored.values[i] < 0) == (raw[i] < 0));
    const double peak = scored.values.cwiseAbs().maxCoeff();
    CHECK((peak == 0.0 || peak == 1.0));
    CHECK(score_document(d, empty).values.isZero(0));

    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    std::shuffle(tokens.begin(), tokens.end(), rng);
    std::string shuffled;
    for (const auto& t : tokens) shuffled += t + " ";
    CHECK(score_sentence(joined, l) == score_sentence(shuffled, l));
  }
}
