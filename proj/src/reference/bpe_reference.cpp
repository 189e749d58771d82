#include "bpe_reference.hpp"

#include <cstdint>
#include <map>
#include <vector>

#include "abctok/errors.hpp"

namespace abctok::reference {
namespace {

using bpe::BpeVocab;
using bpe::TokenId;

// Every newline-free span of the corpus, kept verbatim (no deduplication).
std::vector<std::vector<TokenId>> split_spans(
    std::span<const std::string> corpus) {
  std::vector<std::vector<TokenId>> spans;
  for (const std::string& doc : corpus) {
    std::vector<TokenId> current;
    for (unsigned char c : doc) {
      if (c == '\n') {
        if (!current.empty()) spans.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) spans.push_back(std::move(current));
  }
  return spans;
}

}  // namespace

bpe::BpeVocab train_reference(std::span<const std::string> corpus,
                              std::size_t target_vocab) {
  if (target_vocab < bpe::kAlphabetSize) throw TargetTooSmall(target_vocab);
  std::vector<std::vector<TokenId>> spans = split_spans(corpus);
  BpeVocab vocab;

  while (vocab.size() < target_vocab) {
    // Full rescan: count every adjacent pair in every span.
    std::map<std::pair<TokenId, TokenId>, std::int64_t> counts;
    for (const auto& span : spans)
      for (std::size_t i = 0; i + 1 < span.size(); ++i)
        ++counts[{span[i], span[i + 1]}];

    // Highest count; ties to the smaller concatenated byte-string, then
    // to the smaller left part.
    bool found = false;
    std::pair<TokenId, TokenId> best{};
    std::int64_t best_count = 0;
    std::string best_concat, best_left;
    for (const auto& [pair, count] : counts) {
      const std::string& left = vocab.token_text(pair.first);
      std::string concat = left + vocab.token_text(pair.second);
      bool wins = false;
      if (!found || count > best_count) {
        wins = true;
      } else if (count == best_count) {
        if (concat != best_concat)
          wins = concat < best_concat;
        else
          wins = left < best_left;
      }
      if (wins) {
        found = true;
        best = pair;
        best_count = count;
        best_concat = std::move(concat);
        best_left = left;
      }
    }
    if (!found || best_count < 2) break;

    TokenId merged = vocab.add_merge(best.first, best.second);
    for (auto& span : spans) {
      std::vector<TokenId> rewritten;
      rewritten.reserve(span.size());
      std::size_t i = 0;
      while (i < span.size()) {
        if (i + 1 < span.size() && span[i] == best.first &&
            span[i + 1] == best.second) {
          rewritten.push_back(merged);
          i += 2;
        } else {
          rewritten.push_back(span[i]);
          ++i;
        }
      }
      span = std::move(rewritten);
    }
  }
  vocab.provenance.target_vocab = target_vocab;
  return vocab;
}

}  // namespace abctok::reference
