// Byte-pair encoding over score text: training, application, inversion and
// a byte-exact JSON vocabulary format.
//
// Pair counting and merging never cross '\n', so in interleaved notation no
// token ever spans two bars. Training is deterministic: the next merge is
// the pair with the highest count, ties broken by lexicographically smaller
// concatenated byte-string, then by smaller left part. The same vocabulary
// comes out bit-identical for any worker count.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace abctok::bpe {

using TokenId = std::uint32_t;

inline constexpr std::size_t kAlphabetSize = 256;

struct MergePair {
  TokenId left = 0;
  TokenId right = 0;
  bool operator==(const MergePair&) const = default;
};

// Packed pair key shared by the trainer and the vocabulary tables.
inline std::uint64_t pack_pair(TokenId left, TokenId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}

struct PairKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

class BpeVocab {
 public:
  BpeVocab();  // byte alphabet only, no merges

  std::size_t size() const { return tokens_.size(); }
  const std::vector<MergePair>& merges() const { return merges_; }
  // Byte string a token id expands to. Throws UnknownTokenId.
  const std::string& token_text(TokenId id) const;
  // Merge rank of an adjacent pair, or npos when the pair never merges.
  std::size_t rank_of(TokenId left, TokenId right) const;
  TokenId merged_id(std::size_t rank) const {
    return static_cast<TokenId>(kAlphabetSize + rank);
  }

  // Appends the merge (left, right); both parts must already exist.
  TokenId add_merge(TokenId left, TokenId right);

  std::string to_json() const;  // {"alphabet_size":256,"merges":[...],...}
  static BpeVocab from_json(std::string_view json_text);
  void save(const std::filesystem::path& path) const;
  static BpeVocab load(const std::filesystem::path& path);

  // Recorded verbatim in the vocab file; keep it free of anything
  // run-dependent so identical trainings serialize identically.
  struct Provenance {
    std::size_t target_vocab = 0;
    std::vector<std::string> corpus;
  };
  Provenance provenance;

 private:
  std::vector<std::string> tokens_;  // id -> byte string
  std::vector<MergePair> merges_;    // rank -> pair
  std::unordered_map<std::uint64_t, std::size_t, PairKeyHash> pair_rank_;
};

// Train a vocabulary of up to target_vocab tokens by iterative pair
// merging; stops early once no pair occurs twice. threads <= 0 uses the
// OpenMP default. Throws TargetTooSmall when target_vocab < 256.
BpeVocab train(std::span<const std::string> corpus, std::size_t target_vocab,
               int threads = 0);

// Apply merges in rank order within each newline-delimited span; '\n'
// always encodes as its own single-byte token. Total on all byte strings.
std::vector<TokenId> encode(std::string_view text, const BpeVocab& vocab);

// Concatenation of token byte strings. Throws UnknownTokenId.
std::string decode(std::span<const TokenId> ids, const BpeVocab& vocab);

}  // namespace abctok::bpe
