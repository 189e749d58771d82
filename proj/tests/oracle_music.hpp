// Independent pitch oracle for transposition checks: extracts the MIDI
// number sequence of a tune and strips pitch tokens from its text. Uses
// its own key-signature derivation (major-scale pitch classes, not the
// library's circle-of-fifths tables).
#pragma once

#include <array>
#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace testutil {

namespace detail {

inline int oracle_letter_index(char c) {  // 0..6 = C..B
  static const std::string order = "CDEFGAB";
  return static_cast<int>(order.find(
      static_cast<char>(std::toupper(static_cast<unsigned char>(c)))));
}

inline int oracle_natural_pc(int letter_index) {
  static const int pcs[7] = {0, 2, 4, 5, 7, 9, 11};
  return pcs[letter_index];
}

// Per-letter accidentals of a key, derived by spelling out the relative
// major scale degree by degree.
struct OracleKey {
  std::array<int, 7> letter_acc{};
};

inline OracleKey oracle_key_from_field(const std::string& value) {
  std::size_t i = 0;
  while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i])))
    ++i;
  int letter = oracle_letter_index(value[i]);
  ++i;
  int acc = 0;
  if (i < value.size() && (value[i] == '#' || value[i] == 'b')) {
    acc = value[i] == '#' ? 1 : -1;
    ++i;
  }
  while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i])))
    ++i;
  std::string word;
  while (i < value.size() && std::isalpha(static_cast<unsigned char>(value[i])))
    word += static_cast<char>(std::tolower(static_cast<unsigned char>(value[i++])));

  // semitones and letters from the mode tonic down to its relative major
  int down_semis = 0, down_letters = 0;
  auto head = word.substr(0, 3);
  if (word == "m" || head == "min" || head == "aeo") {
    down_semis = 9;
    down_letters = 5;
  } else if (head == "dor") {
    down_semis = 2;
    down_letters = 1;
  } else if (head == "phr") {
    down_semis = 4;
    down_letters = 2;
  } else if (head == "lyd") {
    down_semis = 5;
    down_letters = 3;
  } else if (head == "mix") {
    down_semis = 7;
    down_letters = 4;
  } else if (head == "loc") {
    down_semis = 11;
    down_letters = 6;
  }
  int major_letter = ((letter - down_letters) % 7 + 7) % 7;
  int major_pc =
      ((oracle_natural_pc(letter) + acc - down_semis) % 12 + 12) % 12;

  // spell the major scale and read off each letter's accidental
  static const int steps[7] = {0, 2, 4, 5, 7, 9, 11};
  OracleKey key;
  for (int degree = 0; degree < 7; ++degree) {
    int scale_letter = (major_letter + degree) % 7;
    int scale_pc = (major_pc + steps[degree]) % 12;
    int delta = (scale_pc - oracle_natural_pc(scale_letter)) % 12;
    if (delta > 6) delta -= 12;
    if (delta < -6) delta += 12;
    key.letter_acc[static_cast<std::size_t>(scale_letter)] = delta;
  }
  return key;
}

}  // namespace detail

// MIDI numbers (middle C = 60) of every note in document order; standard
// ABC accidental persistence to the end of the bar, per letter and octave,
// per voice.
inline std::vector<int> chromatic_sequence(const std::string& text) {
  using detail::OracleKey;
  std::vector<int> out;
  OracleKey key{};
  bool have_key = false;
  std::string voice = "1";
  std::map<std::string, std::map<std::pair<int, int>, int>> bar_acc;

  std::size_t pos = 0;
  bool in_body = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty() || line[0] == '%') continue;
    if (line.size() >= 2 && line[1] == ':' &&
        std::isalpha(static_cast<unsigned char>(line[0]))) {
      if (line[0] == 'K') {
        key = detail::oracle_key_from_field(line.substr(2));
        have_key = true;
        in_body = true;
      } else if (line[0] == 'V') {
        std::size_t b = line.find_first_not_of(" \t", 2);
        std::size_t e = line.find_first_of(" \t", b);
        voice = line.substr(b, e - b);
        bar_acc[voice];
      }
      continue;
    }
    if (!in_body || !have_key) continue;

    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == '"') {
        std::size_t close = line.find('"', i + 1);
        i = close == std::string::npos ? line.size() : close + 1;
        continue;
      }
      if (c == '%') break;
      if (c == '!') {
        std::size_t close = line.find('!', i + 1);
        if (close != std::string::npos) {
          i = close + 1;
          continue;
        }
        ++i;
        continue;
      }
      if (c == '[' && i + 2 < line.size() &&
          std::isalpha(static_cast<unsigned char>(line[i + 1])) &&
          line[i + 2] == ':') {
        std::size_t close = line.find(']', i);
        std::string inner = line.substr(
            i + 3, close == std::string::npos ? line.size() : close - i - 3);
        if (line[i + 1] == 'K') {
          key = detail::oracle_key_from_field(inner);
          bar_acc[voice].clear();
        } else if (line[i + 1] == 'V') {
          std::size_t b = inner.find_first_not_of(" \t");
          std::size_t e = inner.find_first_of(" \t", b);
          voice = inner.substr(b, e == std::string::npos ? inner.size() - b
                                                         : e - b);
        }
        i = close == std::string::npos ? line.size() : close + 1;
        continue;
      }
      if (c == '|') {  // any barline contains a pipe
        bar_acc[voice].clear();
        ++i;
        continue;
      }
      int explicit_acc = 100;  // sentinel: none
      std::size_t g = i;
      if (c == '^' || c == '_') {
        int sign = c == '^' ? 1 : -1;
        explicit_acc = sign;
        ++g;
        if (g < line.size() && line[g] == c) {
          explicit_acc = 2 * sign;
          ++g;
        }
      } else if (c == '=') {
        explicit_acc = 0;
        ++g;
      }
      char upper = g < line.size()
                       ? static_cast<char>(std::toupper(
                             static_cast<unsigned char>(line[g])))
                       : '\0';
      if (upper >= 'A' && upper <= 'G') {
        int letter = detail::oracle_letter_index(line[g]);
        int octave =
            std::islower(static_cast<unsigned char>(line[g])) ? 1 : 0;
        std::size_t j = g + 1;
        while (j < line.size() && (line[j] == '\'' || line[j] == ',')) {
          octave += line[j] == '\'' ? 1 : -1;
          ++j;
        }
        auto& accidentals = bar_acc[voice];
        int acc;
        if (explicit_acc != 100) {
          acc = explicit_acc;
          accidentals[{letter, octave}] = acc;
        } else {
          auto it = accidentals.find({letter, octave});
          acc = it != accidentals.end()
                    ? it->second
                    : key.letter_acc[static_cast<std::size_t>(letter)];
        }
        out.push_back(60 + detail::oracle_natural_pc(letter) + acc +
                      12 * octave);
        i = j;
        continue;
      }
      if (explicit_acc != 100) {
        i = g;
        continue;
      }
      ++i;
    }
  }
  return out;
}

// The tune text with pitch tokens removed from music lines and the key
// name removed from K: fields. Equal for a tune and its transpositions.
inline std::string strip_pitches(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  bool in_body = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string::npos ? text.size() : nl + 1;
    std::string line = text.substr(pos, end - pos);
    pos = end;

    auto strip_key_name = [](const std::string& value) {
      std::size_t i = 0;
      while (i < value.size() &&
             std::isspace(static_cast<unsigned char>(value[i])))
        ++i;
      std::size_t name_begin = i;
      if (i < value.size() &&
          std::isalpha(static_cast<unsigned char>(value[i])))
        ++i;
      if (i < value.size() && (value[i] == '#' || value[i] == 'b')) ++i;
      return value.substr(0, name_begin) + value.substr(i);
    };

    bool is_field = line.size() >= 2 && line[1] == ':' &&
                    std::isalpha(static_cast<unsigned char>(line[0]));
    if (is_field || line.empty() || line[0] == '%') {
      if (is_field && line[0] == 'K') {
        out += "K:" + strip_key_name(line.substr(2));
        in_body = true;
      } else {
        out += line;
      }
      continue;
    }
    if (!in_body) {
      out += line;
      continue;
    }

    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == '"') {
        std::size_t close = line.find('"', i + 1);
        std::size_t stop = close == std::string::npos ? line.size() : close + 1;
        out += line.substr(i, stop - i);
        i = stop;
        continue;
      }
      if (c == '[' && i + 2 < line.size() &&
          std::isalpha(static_cast<unsigned char>(line[i + 1])) &&
          line[i + 2] == ':') {
        std::size_t close = line.find(']', i);
        std::size_t stop = close == std::string::npos ? line.size() : close + 1;
        std::string chunk = line.substr(i, stop - i);
        if (line[i + 1] == 'K' && close != std::string::npos)
          chunk = "[K:" + strip_key_name(line.substr(i + 3, close - i - 3)) +
                  "]";
        out += chunk;
        i = stop;
        continue;
      }
      std::size_t g = i;
      if (c == '^' || c == '_') {
        ++g;
        if (g < line.size() && line[g] == c) ++g;
      } else if (c == '=') {
        ++g;
      }
      char maybe = g < line.size() ? line[g] : '\0';
      char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(maybe)));
      if (upper >= 'A' && upper <= 'G') {
        std::size_t j = g + 1;
        while (j < line.size() && (line[j] == '\'' || line[j] == ',')) ++j;
        i = j;  // drop the whole pitch token
        continue;
      }
      if (g > i) {  // stray accidental glyphs stay
        out += line.substr(i, g - i);
        i = g;
        continue;
      }
      out += c;
      ++i;
    }
  }
  return out;
}

}  // namespace testutil
