// Key-signature augmentation: transpose tunes across the 15 major-key
// spellings (7 flats through 7 sharps) with deterministic respelling.
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abctok/types.hpp"

namespace abctok {

enum class Mode {
  Major,
  Dorian,
  Phrygian,
  Lydian,
  Mixolydian,
  Minor,
  Locrian,
};

// A key signature as circle-of-fifths position plus the tonic spelling it
// implies. letter_accidental(letter) is the signature's -1/0/+1 per letter.
struct KeySignature {
  char tonic_letter = 'C';   // 'A'..'G'
  int tonic_accidental = 0;  // -1 flat, 0 natural, +1 sharp
  Mode mode = Mode::Major;
  int sharps = 0;  // -7..7; flats negative

  int letter_accidental(char letter) const;
  // Pitch class of the tonic, C = 0.
  int tonic_pitch_class() const;
  // Pitch class of the relative-major tonic (equals tonic for Major).
  int relative_major_pitch_class() const;
  // "F#", "Bb", "C" -- letter plus ASCII accidental, no mode suffix.
  std::string spell_tonic() const;

  // The major key at a circle-of-fifths position. Throws UnrecognizedKey
  // outside -7..7.
  static KeySignature major_with_sharps(int sharps);
  // Parse the leading key name of a K: field value ("Eb", "Em", "D mix",
  // "G clef=bass"). Trailing text after the key name is the caller's
  // business. Throws UnrecognizedKey.
  static KeySignature from_field(std::string_view value);
};

// The 15 major keys in circle-of-fifths order Cb .. C#.
const std::array<KeySignature, 15>& fifteen_major_keys();

// Transpose every pitch by the source-to-target tonic interval, chosen in
// (-6, +6] semitones, rewriting K: fields and respelling notes so target
// scale degrees carry no explicit accidental. Non-pitch bytes are
// untouched. Throws UnrecognizedKey and UnsupportedKeyChange.
AbcTune transpose_tune(const AbcTune& tune, const KeySignature& target);

struct AugmentResult {
  std::vector<AbcTune> tunes;  // tune-major order, keys in circle order
  struct Skip {
    std::size_t tune_index;
    std::string reason;
  };
  std::vector<Skip> skipped;
};

// One transposition of every tune into each target key (identity included).
// A tune failing any target is skipped whole and reported.
AugmentResult augment_corpus(std::span<const AbcTune> tunes,
                             std::span<const KeySignature> targets);
AugmentResult augment_corpus(std::span<const AbcTune> tunes);

}  // namespace abctok
