#include "abctok/parser.hpp"

#include <cctype>

#include "abctok/errors.hpp"

namespace abctok {
namespace {

bool is_field_letter(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// First whitespace-delimited token of a field value, e.g. "2 clef=bass" -> 2.
std::string_view field_id(std::string_view value) {
  std::size_t b = 0;
  while (b < value.size() && (value[b] == ' ' || value[b] == '\t')) ++b;
  std::size_t e = b;
  while (e < value.size() && value[e] != ' ' && value[e] != '\t' &&
         value[e] != '\n')
    ++e;
  return value.substr(b, e - b);
}

}  // namespace

BarlineToken match_barline(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  const std::size_t n = text.size();
  bool have_pipe = false;

  // Leading colons (:| ::) or a [| opener.
  std::size_t colons = 0;
  if (i < n && text[i] == ':') {
    while (i < n && text[i] == ':') ++i, ++colons;
    if (i >= n || text[i] != '|') {
      // A colon run with no pipe is a barline only as the :: form.
      if (colons >= 2) return {pos, i};
      return {pos, pos};
    }
  } else if (i < n && text[i] == '[') {
    if (i + 1 >= n || text[i + 1] != '|') return {pos, pos};
    ++i;
  }

  while (i < n && text[i] == '|') ++i, have_pipe = true;
  if (!have_pipe) return {pos, pos};

  if (i < n && text[i] == ':') {
    while (i < n && text[i] == ':') ++i;  // |:  ||:  :|:
    return {pos, i};
  }
  if (i < n && text[i] == ']') {
    return {pos, i + 1};  // |]
  }
  // Repeat-ending digits attach to the barline: |1  :|2  |1,3  |1-3
  if (i < n && is_digit(text[i])) {
    while (i < n && is_digit(text[i])) ++i;
    while (i + 1 < n && (text[i] == ',' || text[i] == '-') &&
           is_digit(text[i + 1])) {
      ++i;
      while (i < n && is_digit(text[i])) ++i;
    }
  }
  return {pos, i};
}

SegmentKind classify_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  bool blank = true;
  for (char c : line) {
    if (c != ' ' && c != '\t') {
      blank = false;
      break;
    }
  }
  if (blank) return SegmentKind::Comment;
  if (line.front() == '%') return SegmentKind::Comment;
  if (line.size() >= 2 && line[1] == ':' && is_field_letter(line[0])) {
    return line[0] == 'w' ? SegmentKind::LyricLine : SegmentKind::HeaderLine;
  }
  return SegmentKind::MusicLine;
}

std::vector<Segment> split_lines(std::string_view text) {
  std::vector<Segment> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    Segment seg;
    seg.begin = start;
    seg.end = end;
    seg.kind = classify_line(text.substr(start, end - start));
    out.push_back(std::move(seg));
    start = end;
  }
  return out;
}

std::vector<Segment> split_bars(const Segment& line, std::string_view text,
                                std::string_view voice_id, bool quote_aware) {
  std::vector<Segment> bars;
  const std::size_t end = line.end;
  std::size_t bar_start = line.begin;
  bool in_quote = false;
  bool in_bracket = false;  // inline field [X:...]
  bool in_brace = false;    // grace notes {...}

  auto push_bar = [&](std::size_t bar_end) {
    Segment bar;
    bar.begin = bar_start;
    bar.end = bar_end;
    bar.kind = SegmentKind::Bar;
    bar.voice_id = std::string(voice_id);
    bars.push_back(std::move(bar));
    bar_start = bar_end;
  };

  std::size_t i = line.begin;
  while (i < end) {
    char c = text[i];
    if (in_quote) {
      if (c == '"') in_quote = false;
      ++i;
      continue;
    }
    if (quote_aware && c == '"') {
      in_quote = true;
      ++i;
      continue;
    }
    if (in_bracket) {
      if (c == ']') in_bracket = false;
      ++i;
      continue;
    }
    if (in_brace) {
      if (c == '}') in_brace = false;
      ++i;
      continue;
    }
    if (c == '{') {
      in_brace = true;
      ++i;
      continue;
    }
    if (c == '[' && i + 2 < end && is_field_letter(text[i + 1]) &&
        text[i + 2] == ':') {
      in_bracket = true;
      ++i;
      continue;
    }
    if (c == '|' || c == ':' || c == '[') {
      BarlineToken tok = match_barline(text.substr(0, end), i);
      if (tok.end > tok.begin) {
        push_bar(tok.end);
        i = tok.end;
        continue;
      }
    }
    ++i;
  }

  if (in_quote) throw UnterminatedQuote(line.begin);

  if (bar_start < end) {
    // A bare trailing '\n' attaches to the last bar instead of becoming
    // a one-byte segment of its own.
    if (!bars.empty() && end - bar_start == 1 && text[bar_start] == '\n') {
      bars.back().end = end;
    } else {
      push_bar(end);
    }
  }
  return bars;
}

AbcTune parse_tune(std::string_view text) {
  AbcTune tune;
  tune.source_text = normalize(text);
  const std::string_view src = tune.source_text;
  std::vector<Segment> lines = split_lines(src);

  // Header block: runs through the top-level K: line.
  bool saw_x = false;
  bool saw_k = false;
  std::vector<std::string_view> declared;  // header V: ids in order
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const Segment& line = lines[i];
    if (line.kind == SegmentKind::Comment) {
      tune.header_lines.push_back(line);
      continue;
    }
    if (line.kind != SegmentKind::HeaderLine) break;
    tune.header_lines.push_back(line);
    char letter = src[line.begin];
    if (letter == 'X') saw_x = true;
    if (letter == 'V')
      declared.push_back(field_id(src.substr(line.begin + 2,
                                             line.end - line.begin - 2)));
    if (letter == 'K') {
      saw_k = true;
      ++i;
      break;
    }
  }
  if (!saw_k) throw MissingHeaderField("K");
  if (!saw_x) throw MissingHeaderField("X");

  for (std::string_view id : declared) {
    VoiceBody voice;
    voice.voice_id = std::string(id);
    tune.voices.push_back(std::move(voice));
  }

  // Body: classify lines, route music lines to the current voice.
  auto switch_voice = [&](std::string_view id) -> std::size_t {
    for (std::size_t v = 0; v < tune.voices.size(); ++v)
      if (tune.voices[v].voice_id == id) return v;
    VoiceBody voice;
    voice.voice_id = std::string(id);
    tune.voices.push_back(std::move(voice));
    return tune.voices.size() - 1;
  };

  std::size_t current = tune.voices.empty() ? static_cast<std::size_t>(-1) : 0;
  bool any_music = false;
  for (; i < lines.size(); ++i) {
    Segment line = lines[i];
    tune.body_lines.push_back(line);
    if (line.kind == SegmentKind::HeaderLine && src[line.begin] == 'V') {
      current = switch_voice(
          field_id(src.substr(line.begin + 2, line.end - line.begin - 2)));
    } else if (line.kind == SegmentKind::MusicLine) {
      if (current == static_cast<std::size_t>(-1)) current = switch_voice("1");
      tune.voices[current].music_lines.push_back(line);
      any_music = true;
    }
  }
  if (!any_music) throw EmptyBody();
  if (tune.voices.empty()) throw EmptyBody();
  return tune;
}

std::vector<Segment> voice_bars(const AbcTune& tune, const VoiceBody& voice,
                                bool quote_aware) {
  std::vector<Segment> bars;
  for (const Segment& line : voice.music_lines) {
    std::vector<Segment> line_bars =
        split_bars(line, tune.source_text, voice.voice_id, quote_aware);
    bars.insert(bars.end(), line_bars.begin(), line_bars.end());
  }
  return bars;
}

std::vector<std::string> voice_bar_texts(const AbcTune& tune,
                                         const VoiceBody& voice) {
  std::vector<std::string> out;
  for (const Segment& bar : voice_bars(tune, voice)) {
    std::string text(bar.text(tune.source_text));
    if (!text.empty() && text.back() == '\n') text.pop_back();
    out.push_back(std::move(text));
  }
  return out;
}

}  // namespace abctok
