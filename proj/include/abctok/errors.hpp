// Error types thrown by the abctok library. Each maps to one failure mode a
// caller can act on; the CLI turns them into per-file skip reports.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace abctok {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- parsing ---

struct MissingHeaderField : Error {
  explicit MissingHeaderField(const std::string& field)
      : Error("missing required header field " + field + ":"), field(field) {}
  std::string field;
};

struct EmptyBody : Error {
  EmptyBody() : Error("tune has no music lines") {}
};

struct UnterminatedQuote : Error {
  explicit UnterminatedQuote(std::size_t line_offset)
      : Error("unterminated \" on music line at byte " +
              std::to_string(line_offset)),
        line_offset(line_offset) {}
  std::size_t line_offset;
};

// --- interleaving ---

struct VoiceMisalignment : Error {
  explicit VoiceMisalignment(std::vector<std::size_t> counts)
      : Error("voices disagree on bar count"), bar_counts(std::move(counts)) {}
  std::vector<std::size_t> bar_counts;
};

struct MalformedVoiceTag : Error {
  explicit MalformedVoiceTag(const std::string& line)
      : Error("body line without a leading [V:..] tag: " + line) {}
};

struct InconsistentVoiceSet : Error {
  explicit InconsistentVoiceSet(const std::string& detail)
      : Error("voice set differs between lines: " + detail) {}
};

// --- patch sequences ---

struct MalformedSequence : Error {
  explicit MalformedSequence(const std::string& detail)
      : Error("malformed patch sequence: " + detail) {}
};

// --- byte-pair encoding ---

struct TargetTooSmall : Error {
  explicit TargetTooSmall(std::size_t target)
      : Error("target vocabulary " + std::to_string(target) +
              " is below the 256-byte alphabet") {}
};

struct UnknownTokenId : Error {
  explicit UnknownTokenId(std::size_t id, std::size_t vocab_size)
      : Error("token id " + std::to_string(id) + " outside vocabulary of " +
              std::to_string(vocab_size)) {}
};

// --- key augmentation ---

struct UnrecognizedKey : Error {
  explicit UnrecognizedKey(const std::string& value)
      : Error("unrecognized key field: " + value) {}
};

struct UnsupportedKeyChange : Error {
  explicit UnsupportedKeyChange(const std::string& detail)
      : Error("mid-tune key change leaves the supported signatures: " + detail) {}
};

// --- metrics ---

struct EmptyCorpus : Error {
  EmptyCorpus() : Error("corpus is empty") {}
};

struct NonPositiveLength : Error {
  NonPositiveLength() : Error("byte length must be positive") {}
};

struct PositiveLogProb : Error {
  explicit PositiveLogProb(double value)
      : Error("log-probability must be finite and <= 0, got " +
              std::to_string(value)) {}
};

}  // namespace abctok
