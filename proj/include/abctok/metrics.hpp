// Corpus and evaluation statistics: bar coverage, patch distributions,
// BPE compression ratio, and the bits-per-byte calculator.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abctok/bpe.hpp"
#include "abctok/types.hpp"

namespace abctok {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

// Share of segments (same segmentation as bar patching) whose byte length
// fits patch_size, as an exact fraction. Throws EmptyCorpus.
Rational bar_coverage(std::span<const AbcTune> corpus, std::size_t patch_size);

// Total code length in bits normalized by raw byte count:
// (-sum(logprobs) / ln 2) / byte_len. Logprobs are natural-log
// probabilities. Throws NonPositiveLength and PositiveLogProb.
double bpb(std::span<const double> logprobs, std::size_t byte_len);

struct CorpusStats {
  std::size_t files = 0;
  std::size_t total_bytes = 0;

  PatchConfig config;
  std::size_t patch_count = 0;         // rows across the corpus, capped
  std::size_t uncapped_patch_count = 0;
  std::size_t pad_symbols = 0;
  double pad_fraction = 0.0;           // PAD slots / total slots
  std::size_t truncated_sequences = 0; // tunes hitting the patch_length cap
  std::size_t truncated_bar_count = 0; // Bar method only

  // byte-length histogram of the method's segments
  std::map<std::size_t, std::size_t> segment_lengths;

  std::optional<double> bytes_per_token;  // with a BPE vocab only
  std::string to_json() const;
};

// Aggregate patching statistics for one configuration; pass a vocab to add
// the BPE compression ratio. Throws EmptyCorpus.
CorpusStats corpus_stats(std::span<const AbcTune> corpus,
                         const PatchConfig& cfg,
                         const bpe::BpeVocab* vocab = nullptr);

}  // namespace abctok
