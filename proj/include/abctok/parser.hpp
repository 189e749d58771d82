// Segmentation of normalized ABC text: line classification, per-voice bar
// splitting with a quote/bracket/brace-aware barline scanner, and tune
// parsing into the AbcTune structure.
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "abctok/types.hpp"

namespace abctok {

// A barline token found on a music line: text like |, ||, |], [|, :|, |:,
// ::, or a repeat-ending form with attached digits (|1, :|2, |1,3).
struct BarlineToken {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open, like Segment
  std::string_view text(std::string_view buffer) const {
    return buffer.substr(begin, end - begin);
  }
};

// Longest barline token starting at `pos`, or length 0 if none starts there.
// Pure lexical check; the caller handles quote/bracket/brace context.
BarlineToken match_barline(std::string_view text, std::size_t pos);

// One segment per line of normalized text, each including its '\n'.
// Segments tile the input exactly. Classification: '%' comment lines and
// blank lines -> Comment, "w:" -> LyricLine, letter+':' -> HeaderLine,
// anything else -> MusicLine.
std::vector<Segment> split_lines(std::string_view text);

// Line classification used by split_lines, exposed for reuse.
SegmentKind classify_line(std::string_view line);

// Split one music line (span incl. trailing '\n') into Bar segments. Each
// bar ends right after its terminating barline; a trailing fragment becomes
// a final bar; the line's '\n' attaches to the last bar. Barline detection
// skips double-quoted strings, inline bracket fields ([K:..] etc.) and
// grace-note braces. Throws UnterminatedQuote when quote_aware and the line
// carries an odd number of '"'; with quote_aware = false the splitting is
// quote-blind (the documented fallback for malformed input).
std::vector<Segment> split_bars(const Segment& line, std::string_view text,
                                std::string_view voice_id = {},
                                bool quote_aware = true);

// Parse normalized (or raw; it normalizes first) text into an AbcTune.
// The header block runs through the top-level K: line; body lines are
// classified and music lines assigned to voices via V: fields.
// Throws MissingHeaderField when X: or K: is absent, EmptyBody when no
// music line follows the header.
AbcTune parse_tune(std::string_view text);

// Bar segments of one voice across all of its music lines, in order.
std::vector<Segment> voice_bars(const AbcTune& tune, const VoiceBody& voice,
                                bool quote_aware = true);

// Bar texts of one voice with trailing newlines stripped; the canonical
// form used for interleaving and bar-content comparisons.
std::vector<std::string> voice_bar_texts(const AbcTune& tune,
                                         const VoiceBody& voice);

}  // namespace abctok
