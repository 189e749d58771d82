#include "abctok/augment.hpp"

#include <omp.h>

#include <cctype>
#include <map>

#include "abctok/errors.hpp"
#include "abctok/parser.hpp"

namespace abctok {
namespace {

// Letters indexed 0..6 = C D E F G A B.
constexpr char kLetters[7] = {'C', 'D', 'E', 'F', 'G', 'A', 'B'};
constexpr int kNaturalPc[7] = {0, 2, 4, 5, 7, 9, 11};
// Sharps of the natural major key per letter (F major = -1).
constexpr int kMajorSharps[7] = {0, 2, 4, -1, 1, 3, 5};
constexpr char kSharpOrder[7] = {'F', 'C', 'G', 'D', 'A', 'E', 'B'};
constexpr char kFlatOrder[7] = {'B', 'E', 'A', 'D', 'G', 'C', 'F'};

int letter_index(char upper) {
  for (int i = 0; i < 7; ++i)
    if (kLetters[i] == upper) return i;
  return -1;
}

// Scale-degree offset of a mode's tonic above the relative-major tonic,
// in letters, and the signature shift relative to the tonic's major key.
int mode_degree(Mode mode) {
  switch (mode) {
    case Mode::Major: return 0;
    case Mode::Dorian: return 1;
    case Mode::Phrygian: return 2;
    case Mode::Lydian: return 3;
    case Mode::Mixolydian: return 4;
    case Mode::Minor: return 5;
    case Mode::Locrian: return 6;
  }
  return 0;
}

int mode_sharps_delta(Mode mode) {
  switch (mode) {
    case Mode::Major: return 0;
    case Mode::Dorian: return -2;
    case Mode::Phrygian: return -4;
    case Mode::Lydian: return 1;
    case Mode::Mixolydian: return -1;
    case Mode::Minor: return -3;
    case Mode::Locrian: return -5;
  }
  return 0;
}

int signature_letter_accidental(int sharps, char letter) {
  if (sharps > 0) {
    for (int i = 0; i < sharps; ++i)
      if (kSharpOrder[i] == letter) return 1;
  } else if (sharps < 0) {
    for (int i = 0; i < -sharps; ++i)
      if (kFlatOrder[i] == letter) return -1;
  }
  return 0;
}

// The mode tonic a signature implies: the mode's scale degree of the
// relative major, spelled with the signature's own accidental.
KeySignature make_key(int sharps, Mode mode) {
  KeySignature rel = KeySignature::major_with_sharps(sharps);
  int idx = (letter_index(rel.tonic_letter) + mode_degree(mode)) % 7;
  KeySignature key;
  key.tonic_letter = kLetters[idx];
  key.tonic_accidental = signature_letter_accidental(sharps, kLetters[idx]);
  key.mode = mode;
  key.sharps = sharps;
  return key;
}

bool is_note_letter(char c) {
  char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return u >= 'A' && u <= 'G';
}

// Key name inside a K: field value: leading spaces, tonic letter, optional
// ASCII accidental, then a possible mode word. name_begin/name_end bound
// the tonic spelling only; everything after it is preserved verbatim.
struct ParsedKeyField {
  KeySignature key;
  std::size_t name_begin = 0;
  std::size_t name_end = 0;
};

ParsedKeyField parse_key_field(std::string_view value) {
  ParsedKeyField parsed;
  std::size_t i = 0;
  while (i < value.size() && (value[i] == ' ' || value[i] == '\t')) ++i;
  parsed.name_begin = i;
  if (i >= value.size() || !is_note_letter(value[i]))
    throw UnrecognizedKey(std::string(value));
  char letter =
      static_cast<char>(std::toupper(static_cast<unsigned char>(value[i])));
  ++i;
  int acc = 0;
  if (i < value.size() && (value[i] == '#' || value[i] == 'b')) {
    acc = value[i] == '#' ? 1 : -1;
    ++i;
  }
  parsed.name_end = i;

  // First word after the tonic, possibly attached ("Gm", "D mix").
  std::size_t w = i;
  while (w < value.size() && (value[w] == ' ' || value[w] == '\t')) ++w;
  std::string word;
  while (w < value.size() &&
         std::isalpha(static_cast<unsigned char>(value[w]))) {
    word += static_cast<char>(std::tolower(static_cast<unsigned char>(value[w])));
    ++w;
  }
  Mode mode = Mode::Major;
  if (word == "m") {
    mode = Mode::Minor;
  } else if (word.size() >= 3) {
    std::string_view head = std::string_view(word).substr(0, 3);
    if (head == "maj" || head == "ion") mode = Mode::Major;
    else if (head == "min" || head == "aeo") mode = Mode::Minor;
    else if (head == "dor") mode = Mode::Dorian;
    else if (head == "phr") mode = Mode::Phrygian;
    else if (head == "lyd") mode = Mode::Lydian;
    else if (head == "mix") mode = Mode::Mixolydian;
    else if (head == "loc") mode = Mode::Locrian;
  }

  int sharps =
      kMajorSharps[letter_index(letter)] + 7 * acc + mode_sharps_delta(mode);
  if (sharps < -7 || sharps > 7) throw UnrecognizedKey(std::string(value));
  parsed.key.tonic_letter = letter;
  parsed.key.tonic_accidental = acc;
  parsed.key.mode = mode;
  parsed.key.sharps = sharps;
  return parsed;
}

// --- the transposing walker ---

struct BarAccidentals {
  // (letter index, octave index) -> explicit accidental in force
  std::map<std::pair<int, int>, int> overrides;
  void clear() { overrides.clear(); }
};

struct Walker {
  std::string_view src;
  std::string out;

  int interval = 0;       // semitones, (-6, +6]
  int fifths_shift = 0;   // target sharps - source sharps
  KeySignature src_key;
  KeySignature tgt_key;

  std::string voice = "1";
  std::map<std::string, BarAccidentals> src_bars;
  std::map<std::string, BarAccidentals> tgt_bars;

  void reset_bar_state() {
    src_bars[voice].clear();
    tgt_bars[voice].clear();
  }

  // Rewrites the tonic spelling of a K: value; updates the key states.
  // Throws UnsupportedKeyChange when the shifted signature exceeds 7
  // accidentals (only possible for mid-tune changes).
  std::string rewrite_key_value(std::string_view value, bool top_level) {
    ParsedKeyField parsed = parse_key_field(value);
    int new_sharps = parsed.key.sharps + fifths_shift;
    if (new_sharps < -7 || new_sharps > 7) {
      if (top_level) throw UnrecognizedKey(std::string(value));
      throw UnsupportedKeyChange(std::string(value));
    }
    KeySignature new_key = make_key(new_sharps, parsed.key.mode);
    src_key = parsed.key;
    tgt_key = new_key;
    for (auto& [id, state] : src_bars) state.clear();
    for (auto& [id, state] : tgt_bars) state.clear();

    std::string rewritten(value.substr(0, parsed.name_begin));
    rewritten += new_key.spell_tonic();
    rewritten += value.substr(parsed.name_end);
    return rewritten;
  }

  void emit_note(int target_chrom) {
    int pc = ((target_chrom % 12) + 12) % 12;
    int letter = -1;
    int acc = 0;
    for (int li = 0; li < 7 && letter < 0; ++li) {
      int key_acc = signature_letter_accidental(tgt_key.sharps, kLetters[li]);
      if (((kNaturalPc[li] + key_acc) % 12 + 12) % 12 == pc) {
        letter = li;
        acc = key_acc;
      }
    }
    if (letter < 0) {
      for (int li = 0; li < 7 && letter < 0; ++li)
        if (kNaturalPc[li] == pc) letter = li, acc = 0;
    }
    if (letter < 0) {
      // black key outside the scale: sharp spelling on the sharp side of
      // the circle, flat spelling on the flat side
      if (tgt_key.sharps >= 0) {
        for (int li = 0; li < 7 && letter < 0; ++li)
          if (kNaturalPc[li] == (pc + 11) % 12) letter = li, acc = 1;
      } else {
        for (int li = 0; li < 7 && letter < 0; ++li)
          if (kNaturalPc[li] == (pc + 1) % 12) letter = li, acc = -1;
      }
    }

    const int octave = (target_chrom - 60 - kNaturalPc[letter] - acc) / 12;
    BarAccidentals& state = tgt_bars[voice];
    auto it = state.overrides.find({letter, octave});
    int in_force = it != state.overrides.end()
                       ? it->second
                       : signature_letter_accidental(tgt_key.sharps,
                                                     kLetters[letter]);
    if (in_force != acc) {
      static constexpr const char* kGlyphs[5] = {"__", "_", "=", "^", "^^"};
      out += kGlyphs[acc + 2];
      state.overrides[{letter, octave}] = acc;
    }
    if (octave >= 1) {
      out += static_cast<char>(
          std::tolower(static_cast<unsigned char>(kLetters[letter])));
      for (int k = 1; k < octave; ++k) out += '\'';
    } else {
      out += kLetters[letter];
      for (int k = 0; k < -octave; ++k) out += ',';
    }
  }

  void walk_music(const Segment& line) {
    std::size_t i = line.begin;
    const std::size_t end = line.end;
    while (i < end) {
      char c = src[i];
      if (c == '"') {
        std::size_t close = src.find('"', i + 1);
        std::size_t stop = close == std::string::npos || close >= end
                               ? end
                               : close + 1;
        out.append(src, i, stop - i);
        i = stop;
        continue;
      }
      if (c == '%') {  // trailing remark
        out.append(src, i, end - i);
        break;
      }
      if (c == '!') {
        std::size_t close = src.find('!', i + 1);
        if (close != std::string::npos && close < end) {
          out.append(src, i, close + 1 - i);
          i = close + 1;
        } else {
          out += c;
          ++i;
        }
        continue;
      }
      if (c == '[' && i + 2 < end &&
          std::isalpha(static_cast<unsigned char>(src[i + 1])) &&
          src[i + 2] == ':') {
        std::size_t close = i + 3;
        bool quoted = false;
        while (close < end && (quoted || src[close] != ']')) {
          if (src[close] == '"') quoted = !quoted;
          ++close;
        }
        std::size_t stop = close < end ? close + 1 : end;
        char field = src[i + 1];
        if (field == 'K' && close < end) {
          out += "[K:";
          out += rewrite_key_value(src.substr(i + 3, close - (i + 3)), false);
          out += ']';
        } else {
          out.append(src, i, stop - i);
          if (field == 'V' && close < end)
            switch_voice(src.substr(i + 3, close - (i + 3)));
        }
        i = stop;
        continue;
      }
      if (c == '|' || c == ':' || c == '[') {
        BarlineToken tok = match_barline(src.substr(0, end), i);
        if (tok.end > tok.begin) {
          out.append(src, tok.begin, tok.end - tok.begin);
          reset_bar_state();
          i = tok.end;
          continue;
        }
      }
      // accidental glyphs, valid only when a note letter follows
      int explicit_acc = 0;
      bool has_explicit = false;
      std::size_t glyphs = 0;
      if (c == '^' || c == '_') {
        glyphs = (i + 1 < end && src[i + 1] == c) ? 2 : 1;
        explicit_acc = (c == '^' ? 1 : -1) * static_cast<int>(glyphs);
        has_explicit = true;
      } else if (c == '=') {
        glyphs = 1;
        explicit_acc = 0;
        has_explicit = true;
      }
      std::size_t note_pos = i + glyphs;
      if (note_pos < end && is_note_letter(src[note_pos])) {
        char letter_char = src[note_pos];
        bool lower = std::islower(static_cast<unsigned char>(letter_char));
        int letter = letter_index(static_cast<char>(
            std::toupper(static_cast<unsigned char>(letter_char))));
        std::size_t j = note_pos + 1;
        int marks = 0;
        while (j < end && (src[j] == '\'' || src[j] == ',')) {
          marks += src[j] == '\'' ? 1 : -1;
          ++j;
        }
        const int octave = (lower ? 1 : 0) + marks;
        BarAccidentals& state = src_bars[voice];
        int eff;
        if (has_explicit) {
          eff = explicit_acc;
          state.overrides[{letter, octave}] = explicit_acc;
        } else {
          auto it = state.overrides.find({letter, octave});
          eff = it != state.overrides.end()
                    ? it->second
                    : signature_letter_accidental(src_key.sharps,
                                                  kLetters[letter]);
        }
        const int chrom = 60 + kNaturalPc[letter] + eff + 12 * octave;
        emit_note(chrom + interval);
        i = j;
        continue;
      }
      if (has_explicit) {  // stray glyphs with no note: keep them
        out.append(src, i, glyphs);
        i += glyphs;
        continue;
      }
      out += c;
      ++i;
    }
  }

  void switch_voice(std::string_view field_value) {
    std::size_t b = 0;
    while (b < field_value.size() &&
           (field_value[b] == ' ' || field_value[b] == '\t'))
      ++b;
    std::size_t e = b;
    while (e < field_value.size() && field_value[e] != ' ' &&
           field_value[e] != '\t' && field_value[e] != '\n' &&
           field_value[e] != ']')
      ++e;
    voice = std::string(field_value.substr(b, e - b));
  }
};

}  // namespace

int KeySignature::letter_accidental(char letter) const {
  return signature_letter_accidental(sharps, letter);
}

int KeySignature::tonic_pitch_class() const {
  int idx = letter_index(tonic_letter);
  return ((kNaturalPc[idx] + tonic_accidental) % 12 + 12) % 12;
}

int KeySignature::relative_major_pitch_class() const {
  return ((sharps * 7) % 12 + 12) % 12;
}

std::string KeySignature::spell_tonic() const {
  std::string out(1, tonic_letter);
  if (tonic_accidental == 1) out += '#';
  if (tonic_accidental == -1) out += 'b';
  return out;
}

KeySignature KeySignature::major_with_sharps(int sharps) {
  if (sharps < -7 || sharps > 7)
    throw UnrecognizedKey("signature with " + std::to_string(sharps) +
                          " sharps");
  // C G D A E B F# C# upward, F Bb Eb Ab Db Gb Cb downward. The tonic is
  // a member of its own scale, so its accidental comes from the signature.
  KeySignature key;
  key.mode = Mode::Major;
  key.sharps = sharps;
  int idx = (4 * ((sharps % 7) + 7)) % 7;
  key.tonic_letter = kLetters[idx];
  key.tonic_accidental = signature_letter_accidental(sharps, key.tonic_letter);
  return key;
}

KeySignature KeySignature::from_field(std::string_view value) {
  return parse_key_field(value).key;
}

const std::array<KeySignature, 15>& fifteen_major_keys() {
  static const std::array<KeySignature, 15> keys = [] {
    std::array<KeySignature, 15> out{};
    for (int s = -7; s <= 7; ++s)
      out[static_cast<std::size_t>(s + 7)] = KeySignature::major_with_sharps(s);
    return out;
  }();
  return keys;
}

AbcTune transpose_tune(const AbcTune& tune, const KeySignature& target) {
  if (target.mode != Mode::Major)
    throw UnrecognizedKey("transposition targets must be major keys");

  // Top-level key from the header block.
  const Segment* k_line = nullptr;
  for (const Segment& line : tune.header_lines)
    if (line.kind == SegmentKind::HeaderLine &&
        tune.source_text[line.begin] == 'K')
      k_line = &line;
  if (k_line == nullptr) throw UnrecognizedKey("tune without K: header");

  std::string_view k_value = k_line->text(tune.source_text).substr(2);
  KeySignature source = parse_key_field(k_value).key;

  Walker walker;
  walker.src = tune.source_text;
  walker.out.reserve(tune.source_text.size() + 64);
  walker.fifths_shift = target.sharps - source.sharps;
  // Minimal octave drift; the tritone tie goes with the circle-of-fifths
  // direction so that X -> Y -> X round-trips land on the exact pitches.
  int diff = ((target.tonic_pitch_class() -
               source.relative_major_pitch_class()) % 12 + 12) % 12;
  if (diff > 6)
    diff -= 12;
  else if (diff == 6 && walker.fifths_shift < 0)
    diff = -6;
  walker.interval = diff;
  walker.src_key = source;
  walker.tgt_key = make_key(target.sharps, source.mode);

  auto emit_line = [&](const Segment& line, bool top_level_header) {
    std::string_view text = line.text(tune.source_text);
    if (line.kind == SegmentKind::HeaderLine &&
        tune.source_text[line.begin] == 'K') {
      bool newline = !text.empty() && text.back() == '\n';
      std::string_view value =
          text.substr(2, text.size() - 2 - (newline ? 1 : 0));
      walker.out += "K:";
      walker.out += walker.rewrite_key_value(value, top_level_header);
      if (newline) walker.out += '\n';
      return;
    }
    if (line.kind == SegmentKind::MusicLine) {
      walker.walk_music(line);
      return;
    }
    if (line.kind == SegmentKind::HeaderLine &&
        tune.source_text[line.begin] == 'V')
      walker.switch_voice(text.substr(2));
    walker.out += text;
  };

  for (const Segment& line : tune.header_lines) emit_line(line, true);
  for (const Segment& line : tune.body_lines) emit_line(line, false);

  if (!tune.body_lines.empty()) return parse_tune(walker.out);

  // Tunes without music lines (zero-bar reconstructions) transpose too.
  // Spans must be rebuilt: rewriting K: can change line lengths.
  AbcTune out;
  out.source_text = std::move(walker.out);
  std::vector<Segment> lines = split_lines(out.source_text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (n < tune.header_lines.size())
      out.header_lines.push_back(lines[n]);
    else
      out.body_lines.push_back(lines[n]);
  }
  for (const VoiceBody& voice : tune.voices) {
    VoiceBody copy;
    copy.voice_id = voice.voice_id;
    out.voices.push_back(std::move(copy));
  }
  return out;
}

AugmentResult augment_corpus(std::span<const AbcTune> tunes,
                             std::span<const KeySignature> targets) {
  AugmentResult result;
  std::vector<std::vector<AbcTune>> per_tune(tunes.size());
  std::vector<std::string> errors(tunes.size());
  std::vector<char> failed(tunes.size(), 0);

  #pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(tunes.size()); ++t) {
    try {
      std::vector<AbcTune> variants;
      variants.reserve(targets.size());
      for (const KeySignature& key : targets)
        variants.push_back(transpose_tune(tunes[t], key));
      per_tune[t] = std::move(variants);
    } catch (const std::exception& e) {
      failed[t] = 1;
      errors[t] = e.what();
    }
  }

  for (std::size_t t = 0; t < tunes.size(); ++t) {
    if (failed[t]) {
      result.skipped.push_back({t, errors[t]});
      continue;
    }
    for (AbcTune& tune : per_tune[t]) result.tunes.push_back(std::move(tune));
  }
  return result;
}

AugmentResult augment_corpus(std::span<const AbcTune> tunes) {
  const auto& keys = fifteen_major_keys();
  return augment_corpus(tunes, std::span<const KeySignature>(keys));
}

}  // namespace abctok
