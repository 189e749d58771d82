#include <doctest.h>

#include <numeric>
#include <random>

#include "abctok/errors.hpp"
#include "abctok/parser.hpp"
#include "helpers.hpp"
#include "oracle_bars.hpp"

using namespace abctok;

namespace {

std::vector<std::string> bar_texts(std::string_view line_text,
                                   bool quote_aware = true) {
  std::string text(line_text);
  Segment line;
  line.begin = 0;
  line.end = text.size();
  line.kind = SegmentKind::MusicLine;
  std::vector<std::string> out;
  for (const Segment& bar : split_bars(line, text, "1", quote_aware))
    out.emplace_back(bar.text(text));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// split_lines
// ---------------------------------------------------------------------------

TEST_CASE("split_lines tiles and classifies") {
  auto segs = split_lines("K:C\nCDE|\n");
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].size() == 4);
  CHECK(segs[1].size() == 5);
  CHECK(segs[0].kind == SegmentKind::HeaderLine);
  CHECK(segs[1].kind == SegmentKind::MusicLine);

  CHECK(split_lines("").empty());

  auto kinds = split_lines("% hi\nw:la la\nV:2\n\nCDE\n");
  REQUIRE(kinds.size() == 5);
  CHECK(kinds[0].kind == SegmentKind::Comment);
  CHECK(kinds[1].kind == SegmentKind::LyricLine);
  CHECK(kinds[2].kind == SegmentKind::HeaderLine);
  CHECK(kinds[3].kind == SegmentKind::Comment);  // blank
  CHECK(kinds[4].kind == SegmentKind::MusicLine);
}

TEST_CASE("split_lines lengths sum to input length on random text") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text = normalize(testutil::random_bytes(rng, 400));
    auto segs = split_lines(text);
    std::size_t total = 0;
    std::size_t expect_begin = 0;
    for (const Segment& seg : segs) {
      CHECK(seg.begin == expect_begin);  // exact tiling
      expect_begin = seg.end;
      total += seg.size();
    }
    CHECK(total == text.size());
  }
}

// ---------------------------------------------------------------------------
// match_barline / split_bars
// ---------------------------------------------------------------------------

TEST_CASE("barline tokens match the grammar") {
  auto len_at = [](std::string_view text, std::size_t pos) {
    BarlineToken tok = match_barline(text, pos);
    return tok.end - tok.begin;
  };
  CHECK(len_at("|", 0) == 1);
  CHECK(len_at("||", 0) == 2);
  CHECK(len_at("|]", 0) == 2);
  CHECK(len_at("[|", 0) == 2);
  CHECK(len_at(":|", 0) == 2);
  CHECK(len_at("|:", 0) == 2);
  CHECK(len_at("::", 0) == 2);
  CHECK(len_at("|1", 0) == 2);
  CHECK(len_at(":|2", 0) == 3);
  CHECK(len_at("|1,3", 0) == 4);
  CHECK(len_at(":", 0) == 0);
  CHECK(len_at("[K", 0) == 0);
  CHECK(len_at("abc", 0) == 0);
}

TEST_CASE("split_bars splits after each barline") {
  auto bars = bar_texts("CDEF|GABc|]\n");
  REQUIRE(bars.size() == 2);
  CHECK(bars[0] == "CDEF|");
  CHECK(bars[1] == "GABc|]\n");
}

TEST_CASE("split_bars ignores barlines in quotes, fields and braces") {
  auto quoted = bar_texts("\"A|B\"C|\n");
  REQUIRE(quoted.size() == 1);
  CHECK(quoted[0] == "\"A|B\"C|\n");

  auto field = bar_texts("C[M:6|8]D|\n");
  REQUIRE(field.size() == 1);

  auto grace = bar_texts("{a|b}C|\n");
  REQUIRE(grace.size() == 1);
}

TEST_CASE("split_bars keeps a barless line whole") {
  auto bars = bar_texts("CDEF\n");
  REQUIRE(bars.size() == 1);
  CHECK(bars[0] == "CDEF\n");
}

TEST_CASE("split_bars attaches repeat-ending digits to the barline") {
  auto bars = bar_texts("CDEF|1 GAB:|2 cde|]\n");
  REQUIRE(bars.size() == 3);
  CHECK(bars[0] == "CDEF|1");
  CHECK(bars[1] == " GAB:|2");
  CHECK(bars[2] == " cde|]\n");
}

TEST_CASE("split_bars raises on an unterminated quote") {
  CHECK_THROWS_AS(bar_texts("ab\"cd|e\n"), UnterminatedQuote);
  // quote-blind fallback splits anyway
  auto blind = bar_texts("ab\"cd|e\n", false);
  CHECK(blind.size() == 2);
}

TEST_CASE("split_bars agrees with the masked-scan oracle") {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::string line =
        normalize(testutil::random_bytes(rng, 60)).substr(0, 60);
    std::size_t nl = line.find('\n');
    line = line.substr(0, nl == std::string::npos ? line.size() : nl + 1);
    if (line.empty()) continue;
    if (testutil::oracle_unterminated_quote(line)) continue;
    auto expected = testutil::oracle_split_bars(line);
    auto got = bar_texts(line);
    CAPTURE(line);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i]);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("split_bars tiles every structured score line") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = testutil::random_score(rng, 1 + trial % 3);
    for (const Segment& line : split_lines(text)) {
      if (line.kind != SegmentKind::MusicLine) continue;
      auto bars = split_bars(line, text);
      std::size_t pos = line.begin;
      for (const Segment& bar : bars) {
        CHECK(bar.begin == pos);
        pos = bar.end;
      }
      CHECK(pos == line.end);
    }
  }
}

// ---------------------------------------------------------------------------
// parse_tune
// ---------------------------------------------------------------------------

TEST_CASE("parse_tune handles the minimal legal tune") {
  AbcTune tune = parse_tune("X:1\nK:C\nCDEF|]\n");
  CHECK(tune.header_lines.size() == 2);
  REQUIRE(tune.voices.size() == 1);
  CHECK(tune.voices[0].voice_id == "1");
  CHECK(tune.voices[0].music_lines.size() == 1);
  CHECK(tune.serialize() == "X:1\nK:C\nCDEF|]\n");
}

TEST_CASE("parse_tune requires X: and K: and a body") {
  CHECK_THROWS_AS(parse_tune("X:1\nCDEF|]\n"), MissingHeaderField);
  CHECK_THROWS_AS(parse_tune("K:C\nCDEF|]\n"), MissingHeaderField);
  CHECK_THROWS_AS(parse_tune("X:1\nK:C\n"), EmptyBody);
  CHECK_THROWS_AS(parse_tune("X:1\nK:C\n% only a comment\n"), EmptyBody);
}

TEST_CASE("parse_tune assigns music to voices in declaration order") {
  const std::string text =
      "X:7\nT:Three Part Study\nM:4/4\nL:1/4\n"
      "V:1 clef=treble\nV:2 clef=treble\nV:3 clef=bass\nK:G\n"
      "V:1\nBcde|d4|]\n"
      "V:2\nG2A2|B4|]\n"
      "V:3\nG,2D,2|G,4|]\n";
  AbcTune tune = parse_tune(text);
  REQUIRE(tune.voices.size() == 3);
  CHECK(tune.voices[0].voice_id == "1");
  CHECK(tune.voices[2].voice_id == "3");
  for (const VoiceBody& voice : tune.voices)
    CHECK(voice.music_lines.size() == 1);
  CHECK(tune.serialize() == normalize(text));
}

TEST_CASE("parse_tune keeps inline body fields with the body") {
  AbcTune tune = parse_tune("X:1\nK:C\nCDE|\nM:3/4\nFGA|]\n");
  CHECK(tune.header_lines.size() == 2);
  CHECK(tune.body_lines.size() == 3);
  CHECK(tune.voices[0].music_lines.size() == 2);
}

TEST_CASE("parse_tune round-trips every structured random score") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = testutil::random_score(rng, 1 + trial % 3);
    AbcTune tune = parse_tune(text);
    CHECK(tune.serialize() == normalize(text));
    CHECK(tune.serialize() == tune.source_text);
  }
}

TEST_CASE("parse_tune round-trips the bundled corpus byte for byte") {
  auto corpus = testutil::load_bundled_corpus();
  REQUIRE(corpus.size() >= 50);
  for (const std::string& text : corpus) {
    AbcTune tune = parse_tune(text);
    CHECK(tune.serialize() == normalize(text));
    CHECK(tune.voices.size() >= 2);  // the corpus is multitrack
  }
}
