#include "abctok/metrics.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "abctok/errors.hpp"
#include "abctok/patchers.hpp"

namespace abctok {

Rational bar_coverage(std::span<const AbcTune> corpus,
                      std::size_t patch_size) {
  if (corpus.empty()) throw EmptyCorpus();
  Rational coverage;
  coverage.den = 0;
  for (const AbcTune& tune : corpus) {
    for (const Segment& segment :
         patch_segments(tune.source_text, PatchMethod::Bar)) {
      ++coverage.den;
      if (segment.size() <= patch_size) ++coverage.num;
    }
  }
  if (coverage.den == 0) throw EmptyCorpus();
  return coverage;
}

double bpb(std::span<const double> logprobs, std::size_t byte_len) {
  if (byte_len == 0) throw NonPositiveLength();
  double total = 0.0;
  for (double lp : logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) throw PositiveLogProb(lp);
    total += lp;
  }
  return (-total / std::numbers::ln2) / static_cast<double>(byte_len);
}

CorpusStats corpus_stats(std::span<const AbcTune> corpus,
                         const PatchConfig& cfg, const bpe::BpeVocab* vocab) {
  if (corpus.empty()) throw EmptyCorpus();
  CorpusStats stats;
  stats.config = cfg;

  std::size_t token_count = 0;
  for (const AbcTune& tune : corpus) {
    const std::string& text = tune.source_text;
    ++stats.files;
    stats.total_bytes += text.size();

    PatchSequence seq = tokenize(text, cfg);
    stats.patch_count += seq.rows();
    stats.truncated_bar_count += seq.truncated_bar_count;
    for (Symbol id : seq.ids) stats.pad_symbols += id == kPad ? 1 : 0;

    std::size_t uncapped = uncapped_patch_count(text, cfg);
    stats.uncapped_patch_count += uncapped;
    if (uncapped > cfg.patch_length) ++stats.truncated_sequences;

    for (const Segment& segment : patch_segments(text, cfg.method))
      ++stats.segment_lengths[segment.size()];

    if (vocab != nullptr) token_count += bpe::encode(text, *vocab).size();
  }
  const std::size_t slots = stats.patch_count * cfg.patch_size;
  stats.pad_fraction =
      slots == 0 ? 0.0 : static_cast<double>(stats.pad_symbols) / slots;
  if (vocab != nullptr && token_count > 0)
    stats.bytes_per_token =
        static_cast<double>(stats.total_bytes) / token_count;
  return stats;
}

std::string CorpusStats::to_json() const {
  nlohmann::ordered_json doc;
  doc["files"] = files;
  doc["total_bytes"] = total_bytes;
  doc["method"] = std::string(to_string(config.method));
  doc["patch_size"] = config.patch_size;
  doc["patch_length"] = config.patch_length;
  doc["patch_count"] = patch_count;
  doc["uncapped_patch_count"] = uncapped_patch_count;
  doc["pad_symbols"] = pad_symbols;
  doc["pad_fraction"] = pad_fraction;
  doc["truncated_sequences"] = truncated_sequences;
  if (config.method == PatchMethod::Bar)
    doc["truncated_bar_count"] = truncated_bar_count;
  nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
  for (const auto& [length, count] : segment_lengths)
    histogram[std::to_string(length)] = count;
  doc["segment_length_histogram"] = std::move(histogram);
  if (bytes_per_token) doc["bytes_per_token"] = *bytes_per_token;
  return doc.dump();
}

}  // namespace abctok
