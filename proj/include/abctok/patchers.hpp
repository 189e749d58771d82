// The four patching tokenizers over score text and their shared inverse.
//
// byte        fixed-size chunks of the raw text
// bar         one patch per segment, padded or byte-truncated to patch_size
// bar-stream  each segment chunked to patch_size pieces, last piece padded
// line-stream like bar-stream but over whole lines
//
// byte, bar-stream and line-stream invert exactly through detokenize();
// bar inverts exactly iff no segment exceeds patch_size
// (truncated_bar_count records how many did).
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "abctok/types.hpp"

namespace abctok {

// The segmentation a method patches over. Bar/BarStream: music lines split
// into bars, header/comment/lyric lines kept whole; LineStream: one segment
// per line; Byte: the whole text as one segment. Music lines with malformed
// quoting fall back to quote-blind bar splitting instead of failing.
std::vector<Segment> patch_segments(std::string_view text, PatchMethod method);

PatchSequence tokenize_byte(std::string_view text, const PatchConfig& cfg);
PatchSequence tokenize_bar(std::string_view text, const PatchConfig& cfg);
PatchSequence tokenize_bar_stream(std::string_view text,
                                  const PatchConfig& cfg);
PatchSequence tokenize_line_stream(std::string_view text,
                                   const PatchConfig& cfg);

// Dispatch on cfg.method.
PatchSequence tokenize(std::string_view text, const PatchConfig& cfg);

// Patch rows the text would produce before the patch_length cap.
std::size_t uncapped_patch_count(std::string_view text,
                                 const PatchConfig& cfg);

// Concatenate rows, drop PAD/BOS/EOS, map ids back to bytes.
// Throws MalformedSequence when PAD appears outside a row's suffix or an
// id falls outside the alphabet.
std::string detokenize(const PatchSequence& seq);

// Wrap a sequence in dedicated BOS / EOS rows (one meaningful symbol each,
// PAD-filled). The body is re-truncated so the framed sequence still fits
// config.patch_length.
PatchSequence frame_sequence(PatchSequence seq);

}  // namespace abctok
