#include "abctok/patchers.hpp"

#include "abctok/errors.hpp"
#include "abctok/parser.hpp"

namespace abctok {
namespace {

// Append one patch_size row holding text[begin, end), PAD-suffixed.
void emit_row(std::vector<Symbol>& ids, std::string_view text,
              std::size_t begin, std::size_t end, std::size_t patch_size) {
  for (std::size_t i = begin; i < end; ++i)
    ids.push_back(static_cast<unsigned char>(text[i]));
  ids.resize(ids.size() + (patch_size - (end - begin)), kPad);
}

// Chunk [begin, end) into ceil(len / patch_size) rows, last one padded.
void emit_chunked(std::vector<Symbol>& ids, std::string_view text,
                  std::size_t begin, std::size_t end, std::size_t patch_size) {
  for (std::size_t pos = begin; pos < end; pos += patch_size)
    emit_row(ids, text, pos, std::min(pos + patch_size, end), patch_size);
}

void apply_sequence_cap(PatchSequence& seq) {
  const std::size_t cap = seq.config.patch_length * seq.config.patch_size;
  if (seq.ids.size() > cap) seq.ids.resize(cap);
}

std::size_t ceil_div(std::size_t n, std::size_t d) { return (n + d - 1) / d; }

}  // namespace

std::vector<Segment> patch_segments(std::string_view text,
                                    PatchMethod method) {
  std::vector<Segment> lines = split_lines(text);
  if (method == PatchMethod::LineStream) return lines;
  if (method == PatchMethod::Byte) {
    if (text.empty()) return {};
    Segment whole;
    whole.begin = 0;
    whole.end = text.size();
    whole.kind = SegmentKind::MusicLine;
    return {whole};
  }
  std::vector<Segment> segments;
  for (const Segment& line : lines) {
    if (line.kind != SegmentKind::MusicLine) {
      segments.push_back(line);
      continue;
    }
    try {
      std::vector<Segment> bars = split_bars(line, text);
      segments.insert(segments.end(), bars.begin(), bars.end());
    } catch (const UnterminatedQuote&) {
      std::vector<Segment> bars = split_bars(line, text, {}, false);
      segments.insert(segments.end(), bars.begin(), bars.end());
    }
  }
  return segments;
}

PatchSequence tokenize_byte(std::string_view text, const PatchConfig& cfg) {
  PatchSequence seq;
  seq.config = cfg;
  seq.ids.reserve(ceil_div(text.size(), cfg.patch_size) * cfg.patch_size);
  emit_chunked(seq.ids, text, 0, text.size(), cfg.patch_size);
  apply_sequence_cap(seq);
  return seq;
}

PatchSequence tokenize_bar(std::string_view text, const PatchConfig& cfg) {
  PatchSequence seq;
  seq.config = cfg;
  for (const Segment& segment : patch_segments(text, PatchMethod::Bar)) {
    std::size_t end = segment.begin + std::min(segment.size(), cfg.patch_size);
    if (segment.size() > cfg.patch_size) ++seq.truncated_bar_count;
    emit_row(seq.ids, text, segment.begin, end, cfg.patch_size);
  }
  apply_sequence_cap(seq);
  return seq;
}

PatchSequence tokenize_bar_stream(std::string_view text,
                                  const PatchConfig& cfg) {
  PatchSequence seq;
  seq.config = cfg;
  for (const Segment& segment : patch_segments(text, PatchMethod::BarStream))
    emit_chunked(seq.ids, text, segment.begin, segment.end, cfg.patch_size);
  apply_sequence_cap(seq);
  return seq;
}

PatchSequence tokenize_line_stream(std::string_view text,
                                   const PatchConfig& cfg) {
  PatchSequence seq;
  seq.config = cfg;
  for (const Segment& line : patch_segments(text, PatchMethod::LineStream))
    emit_chunked(seq.ids, text, line.begin, line.end, cfg.patch_size);
  apply_sequence_cap(seq);
  return seq;
}

PatchSequence tokenize(std::string_view text, const PatchConfig& cfg) {
  switch (cfg.method) {
    case PatchMethod::Byte:
      return tokenize_byte(text, cfg);
    case PatchMethod::Bar:
      return tokenize_bar(text, cfg);
    case PatchMethod::BarStream:
      return tokenize_bar_stream(text, cfg);
    case PatchMethod::LineStream:
      return tokenize_line_stream(text, cfg);
  }
  return {};
}

std::size_t uncapped_patch_count(std::string_view text,
                                 const PatchConfig& cfg) {
  if (cfg.method == PatchMethod::Byte)
    return ceil_div(text.size(), cfg.patch_size);
  std::size_t count = 0;
  for (const Segment& segment : patch_segments(text, cfg.method))
    count += cfg.method == PatchMethod::Bar
                 ? 1
                 : ceil_div(segment.size(), cfg.patch_size);
  return count;
}

std::string detokenize(const PatchSequence& seq) {
  const std::size_t width = seq.config.patch_size;
  if (width == 0 || seq.ids.size() % width != 0)
    throw MalformedSequence("ragged sequence");
  std::string out;
  out.reserve(seq.ids.size());
  for (std::size_t r = 0; r < seq.rows(); ++r) {
    bool saw_pad = false;
    for (Symbol id : seq.row(r)) {
      if (id == kPad) {
        saw_pad = true;
        continue;
      }
      if (saw_pad)
        throw MalformedSequence("PAD inside row " + std::to_string(r));
      if (id == kBos || id == kEos) continue;
      if (id >= kSymbolCount)
        throw MalformedSequence("symbol id " + std::to_string(id) +
                                " out of range");
      out += static_cast<char>(static_cast<unsigned char>(id));
    }
  }
  return out;
}

PatchSequence frame_sequence(PatchSequence seq) {
  const std::size_t width = seq.config.patch_size;
  const std::size_t body_cap =
      seq.config.patch_length > 2 ? seq.config.patch_length - 2 : 0;
  if (seq.rows() > body_cap) seq.ids.resize(body_cap * width);

  std::vector<Symbol> framed;
  framed.reserve(seq.ids.size() + 2 * width);
  framed.push_back(kBos);
  framed.resize(width, kPad);
  framed.insert(framed.end(), seq.ids.begin(), seq.ids.end());
  framed.push_back(kEos);
  framed.resize(framed.size() + width - 1, kPad);
  seq.ids = std::move(framed);
  return seq;
}

}  // namespace abctok
