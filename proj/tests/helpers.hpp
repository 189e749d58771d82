// Shared test utilities: deterministic random generators for texts and
// synthetic scores, plus bundled-corpus access.
#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "abctok/pipeline.hpp"

namespace testutil {

inline std::filesystem::path data_dir() {
#ifdef ABCTOK_DATA_DIR
  return ABCTOK_DATA_DIR;
#else
  return "data";
#endif
}

inline std::vector<std::string> load_bundled_corpus() {
  std::vector<std::filesystem::path> files =
      abctok::expand_inputs({(data_dir() / "corpus").string()});
  std::vector<std::string> texts;
  texts.reserve(files.size());
  for (const auto& file : files)
    texts.push_back(abctok::read_file(file));
  return texts;
}

// Random printable text with newlines; never empty unless len == 0.
inline std::string random_bytes(std::mt19937& rng, std::size_t len) {
  static const std::string alphabet =
      "ABCDEFGabcdefg|:]^_=',0123456789 /z\"{}[%wK.!()-";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() + 3);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::size_t k = pick(rng);
    out += k < alphabet.size() ? alphabet[k] : '\n';
  }
  return out;
}

// A structurally valid little score: header, barlines, notes, the odd
// quoted chord / grace group / decoration. Quotes always balanced.
inline std::string random_score(std::mt19937& rng, int voices = 1) {
  static const char* keys[] = {"C",  "G",  "D",  "A",  "E",  "B",  "F#",
                               "C#", "F",  "Bb", "Eb", "Ab", "Db", "Gb",
                               "Cb"};
  static const char* barlines[] = {"|", "|", "|", "||", ":|", "|:"};
  std::uniform_int_distribution<int> d12(0, 11), d100(0, 99);

  std::string out = "X:" + std::to_string(1 + d100(rng)) + "\n";
  out += "T:Study No. " + std::to_string(1 + d100(rng)) + "\n";
  out += "M:4/4\nL:1/8\n";
  for (int v = 1; v <= voices && voices > 1; ++v)
    out += "V:" + std::to_string(v) + "\n";
  out += std::string("K:") + keys[d12(rng) % 15] + "\n";

  std::uniform_int_distribution<int> bars_per_line(2, 4), lines(1, 3);
  std::uniform_int_distribution<int> notes_per_bar(2, 6);
  static const std::string letters = "CDEFGABcdefgab";
  for (int v = 1; v <= voices; ++v) {
    if (voices > 1) out += "V:" + std::to_string(v) + "\n";
    int n_lines = lines(rng);
    for (int l = 0; l < n_lines; ++l) {
      int n_bars = bars_per_line(rng);
      for (int b = 0; b < n_bars; ++b) {
        if (d100(rng) < 12) out += "\"Am7\"";
        if (d100(rng) < 8) out += "!f!";
        if (d100(rng) < 8) out += "{ag}";
        int n_notes = notes_per_bar(rng);
        for (int n = 0; n < n_notes; ++n) {
          int roll = d100(rng);
          if (roll < 10) out += '^';
          else if (roll < 16) out += '_';
          else if (roll < 20) out += '=';
          out += letters[static_cast<std::size_t>(d12(rng)) % letters.size()];
          if (d100(rng) < 12) out += '\'';
          if (d100(rng) < 30) out += std::to_string(1 + d100(rng) % 4);
          if (d100(rng) < 10) out += 'z';
        }
        bool last = l + 1 == n_lines && b + 1 == n_bars;
        out += last ? "|]" : barlines[static_cast<std::size_t>(d100(rng)) % 6];
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace testutil
