#include "abctok/interleave.hpp"

#include <cctype>

#include "abctok/errors.hpp"
#include "abctok/parser.hpp"

namespace abctok {
namespace {

struct VoiceChunk {
  std::string id;
  std::string content;
};

// Split one interleaved body line (without its '\n') into [V:id]-tagged
// chunks. Tag boundaries inside double quotes are ignored.
std::vector<VoiceChunk> parse_voice_chunks(std::string_view line) {
  std::vector<VoiceChunk> chunks;
  if (line.substr(0, 3) != "[V:") throw MalformedVoiceTag(std::string(line));
  std::size_t pos = 0;
  while (pos < line.size()) {
    // at a "[V:" tag
    std::size_t id_begin = pos + 3;
    std::size_t close = line.find(']', id_begin);
    if (close == std::string_view::npos)
      throw MalformedVoiceTag(std::string(line));
    VoiceChunk chunk;
    chunk.id = std::string(line.substr(id_begin, close - id_begin));
    while (!chunk.id.empty() && chunk.id.front() == ' ') chunk.id.erase(0, 1);
    while (!chunk.id.empty() && chunk.id.back() == ' ') chunk.id.pop_back();
    if (chunk.id.empty()) throw MalformedVoiceTag(std::string(line));

    // content runs to the next top-level "[V:" or line end
    std::size_t content_begin = close + 1;
    bool in_quote = false;
    std::size_t j = content_begin;
    for (; j < line.size(); ++j) {
      if (line[j] == '"') {
        in_quote = !in_quote;
        continue;
      }
      if (!in_quote && line.compare(j, 3, "[V:") == 0) break;
    }
    chunk.content = std::string(line.substr(content_begin, j - content_begin));
    chunks.push_back(std::move(chunk));
    pos = j;
  }
  return chunks;
}

}  // namespace

std::string to_interleaved(const AbcTune& tune) {
  std::vector<std::vector<std::string>> bars;
  bars.reserve(tune.voices.size());
  for (const VoiceBody& voice : tune.voices)
    bars.push_back(voice_bar_texts(tune, voice));

  std::vector<std::size_t> counts;
  counts.reserve(bars.size());
  for (const auto& voice_bars : bars) counts.push_back(voice_bars.size());
  for (std::size_t c : counts)
    if (c != counts.front()) throw VoiceMisalignment(counts);

  std::string out;
  out.reserve(tune.source_text.size() + 16 * counts.size());
  for (const Segment& line : tune.header_lines)
    out += line.text(tune.source_text);
  const std::size_t bar_count = counts.empty() ? 0 : counts.front();
  for (std::size_t i = 0; i < bar_count; ++i) {
    for (std::size_t v = 0; v < tune.voices.size(); ++v) {
      out += "[V:";
      out += tune.voices[v].voice_id;
      out += ']';
      out += bars[v][i];
    }
    out += '\n';
  }
  return out;
}

AbcTune from_interleaved(std::string_view text) {
  std::string norm = normalize(text);
  std::vector<Segment> lines = split_lines(norm);

  // Header block, as in parse_tune: everything through the top-level K:.
  std::vector<Segment> header;
  std::vector<std::string> declared;
  bool saw_k = false;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const Segment& line = lines[i];
    if (line.kind == SegmentKind::Comment) {
      header.push_back(line);
      continue;
    }
    if (line.kind != SegmentKind::HeaderLine) break;
    header.push_back(line);
    char letter = norm[line.begin];
    if (letter == 'V') {
      std::string_view value =
          line.text(norm).substr(2);
      std::size_t b = value.find_first_not_of(" \t");
      std::size_t e = value.find_first_of(" \t\n", b);
      declared.emplace_back(value.substr(b, e - b));
    }
    if (letter == 'K') {
      saw_k = true;
      ++i;
      break;
    }
  }
  if (!saw_k) throw MissingHeaderField("K");

  // Body lines -> per-voice bar lists; voice order fixed by the first line.
  std::vector<std::string> order;
  std::vector<std::vector<std::string>> voice_bars;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i].text(norm);
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    std::vector<VoiceChunk> chunks = parse_voice_chunks(line);
    if (order.empty()) {
      for (const VoiceChunk& chunk : chunks) order.push_back(chunk.id);
      voice_bars.resize(order.size());
    } else if (chunks.size() != order.size()) {
      throw InconsistentVoiceSet("expected " + std::to_string(order.size()) +
                                 " voices, line has " +
                                 std::to_string(chunks.size()));
    }
    for (std::size_t v = 0; v < chunks.size(); ++v) {
      if (chunks[v].id != order[v])
        throw InconsistentVoiceSet("voice " + chunks[v].id +
                                   " where voice " + order[v] + " expected");
      voice_bars[v].push_back(chunks[v].content);
    }
  }

  // Header-declared voices missing from the body get zero bars.
  for (const std::string& id : declared) {
    bool known = false;
    for (const std::string& seen : order) known |= (seen == id);
    if (!known) {
      order.push_back(id);
      voice_bars.emplace_back();
    }
  }

  // Reconstruct plain multi-voice text: per voice, a V: switch line then
  // one line per bar. One bar per line keeps re-splitting trivially exact.
  std::string source;
  for (const Segment& line : header) source += line.text(norm);
  for (std::size_t v = 0; v < order.size(); ++v) {
    source += "V:";
    source += order[v];
    source += '\n';
    for (const std::string& bar : voice_bars[v]) {
      source += bar;
      source += '\n';
    }
  }

  bool any_bar = false;
  for (const auto& bars : voice_bars) any_bar |= !bars.empty();
  if (any_bar) return parse_tune(source);

  // Empty body: zero bars per declared voice. Built by hand since
  // parse_tune would reject a tune without music lines.
  AbcTune tune;
  tune.source_text = source;
  std::vector<Segment> out_lines = split_lines(tune.source_text);
  for (std::size_t n = 0; n < out_lines.size(); ++n) {
    if (n < header.size())
      tune.header_lines.push_back(out_lines[n]);
    else
      tune.body_lines.push_back(out_lines[n]);
  }
  for (const std::string& id : order) {
    VoiceBody voice;
    voice.voice_id = id;
    tune.voices.push_back(std::move(voice));
  }
  return tune;
}

}  // namespace abctok
