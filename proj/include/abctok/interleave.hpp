// Interleaved multitrack serialization: every output body line carries the
// same bar index from every voice, tagged [V:id].
#pragma once

#include <string>
#include <string_view>

#include "abctok/types.hpp"

namespace abctok {

// Serialize a multi-voice tune as interleaved text: the original header
// lines (V: definitions retained) followed by one line per bar index,
// each the concatenation of [V:id] + that voice's bar (newlines stripped)
// in voice declaration order. Non-music body lines other than V: switches
// are not representable per bar and are dropped.
// Throws VoiceMisalignment when voices disagree on bar count.
std::string to_interleaved(const AbcTune& tune);

// Inverse of to_interleaved for output-shaped text: body lines must consist
// of [V:id]-prefixed chunks with one chunk per voice in a fixed order.
// Reassembles per-voice bar streams, one bar per reconstructed line.
// Throws MalformedVoiceTag and InconsistentVoiceSet.
AbcTune from_interleaved(std::string_view text);

}  // namespace abctok
