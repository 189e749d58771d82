// Shared domain types for ABC score text: tunes, segments, patch sequences
// and their configuration. No parsing logic lives here.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace abctok {

// Symbol alphabet: the 256 raw byte values plus three control symbols.
// Keeping PAD outside the byte range makes padding uniquely removable.
using Symbol = std::uint16_t;

inline constexpr Symbol kPad = 256;
inline constexpr Symbol kBos = 257;
inline constexpr Symbol kEos = 258;
inline constexpr std::size_t kSymbolCount = 259;

// Paper-reproducing defaults. The zero-config path of every consumer below
// (PatchConfig, the BPE trainer, the CLI) resolves to these values.
inline constexpr std::size_t kDefaultBarPatchSize = 64;
inline constexpr std::size_t kDefaultStreamPatchSize = 16;
inline constexpr std::size_t kDefaultPatchLength = 512;
inline constexpr std::size_t kDefaultBpeContext = 4096;
inline constexpr std::size_t kDefaultBpeVocab = 50000;

enum class SegmentKind { HeaderLine, Bar, MusicLine, LyricLine, Comment };

// Half-open byte span over one normalized text buffer. Segments produced
// from a buffer tile it exactly when concatenated in order.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  SegmentKind kind = SegmentKind::MusicLine;
  std::string voice_id;  // set for kind == Bar

  std::size_t size() const { return end - begin; }
  std::string_view text(std::string_view buffer) const {
    return buffer.substr(begin, end - begin);
  }
};

enum class PatchMethod { Byte, Bar, BarStream, LineStream };

std::string_view to_string(PatchMethod method);
// Accepts the CLI spellings: byte, bar, bar-stream, line-stream.
PatchMethod patch_method_from_string(std::string_view name);

struct PatchConfig {
  PatchMethod method = PatchMethod::Bar;
  std::size_t patch_size = kDefaultBarPatchSize;   // bytes per patch
  std::size_t patch_length = kDefaultPatchLength;  // max patches per sequence

  // patch_size 64 for Bar, 16 otherwise; patch_length 512.
  static PatchConfig defaults(PatchMethod method);
};

// Fixed-width rows of symbol ids, row-major. PAD only ever appears as a
// contiguous row suffix; rows() * config.patch_size == ids.size().
struct PatchSequence {
  std::vector<Symbol> ids;
  PatchConfig config;
  std::size_t truncated_bar_count = 0;  // Bar method only

  std::size_t rows() const {
    return config.patch_size == 0 ? 0 : ids.size() / config.patch_size;
  }
  std::span<const Symbol> row(std::size_t i) const {
    return {ids.data() + i * config.patch_size, config.patch_size};
  }
};

// One voice of a tune: ordered music-line spans into the tune's source_text.
struct VoiceBody {
  std::string voice_id;
  std::vector<Segment> music_lines;
};

// A parsed tune. header_lines covers the top header block (X: .. K:),
// body_lines every line after it in file order; voices index the body's
// music lines per voice. Spans reference source_text, which is the
// normalized input; serialize() reproduces it byte for byte.
struct AbcTune {
  std::string source_text;
  std::vector<Segment> header_lines;
  std::vector<Segment> body_lines;
  std::vector<VoiceBody> voices;

  std::string serialize() const;
  // Raw text of a header field's value (first match by letter), or empty.
  std::string_view header_value(char field_letter) const;
};

// CRLF -> LF, strip one UTF-8 BOM, ensure the text ends in a newline.
// Empty input stays empty. Idempotent.
std::string normalize(std::string_view text);

}  // namespace abctok
