#include "abctok/bpe.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abctok/errors.hpp"

namespace abctok::bpe {
namespace {

using PairCounts =
    std::unordered_map<std::uint64_t, std::int64_t, PairKeyHash>;

// One newline-free span of the corpus after deduplication.
struct Word {
  std::vector<TokenId> tokens;
  std::int64_t count = 0;
};

// The documented merge order: higher count first, then lexicographically
// smaller concatenated byte-string, then smaller left part (the final
// component makes the order total across distinct pairs).
struct Candidate {
  std::uint64_t key = 0;
  std::int64_t count = 0;
};

bool better(const Candidate& a, const Candidate& b, const BpeVocab& vocab) {
  if (a.count != b.count) return a.count > b.count;
  const std::string& al = vocab.token_text(static_cast<TokenId>(a.key >> 32));
  const std::string& ar = vocab.token_text(static_cast<TokenId>(a.key));
  const std::string& bl = vocab.token_text(static_cast<TokenId>(b.key >> 32));
  const std::string& br = vocab.token_text(static_cast<TokenId>(b.key));
  std::string ac = al + ar;
  std::string bc = bl + br;
  if (ac != bc) return ac < bc;
  return al < bl;
}

void count_word_pairs(const Word& word, PairCounts& counts,
                      std::int64_t sign) {
  for (std::size_t i = 0; i + 1 < word.tokens.size(); ++i)
    counts[pack_pair(word.tokens[i], word.tokens[i + 1])] +=
        sign * word.count;
}

bool contains_pair(const Word& word, TokenId left, TokenId right) {
  for (std::size_t i = 0; i + 1 < word.tokens.size(); ++i)
    if (word.tokens[i] == left && word.tokens[i + 1] == right) return true;
  return false;
}

// Replace (left, right) by merged, leftmost first, non-overlapping.
void apply_merge(Word& word, TokenId left, TokenId right, TokenId merged) {
  std::vector<TokenId> out;
  out.reserve(word.tokens.size());
  std::size_t i = 0;
  while (i < word.tokens.size()) {
    if (i + 1 < word.tokens.size() && word.tokens[i] == left &&
        word.tokens[i + 1] == right) {
      out.push_back(merged);
      i += 2;
    } else {
      out.push_back(word.tokens[i]);
      ++i;
    }
  }
  word.tokens = std::move(out);
}

void merge_counts(PairCounts& into, const PairCounts& from) {
  for (const auto& [key, count] : from) {
    auto it = into.find(key);
    if (it == into.end())
      into.emplace(key, count);
    else
      it->second += count;
  }
}

}  // namespace

BpeVocab::BpeVocab() {
  tokens_.reserve(kAlphabetSize);
  for (unsigned b = 0; b < kAlphabetSize; ++b)
    tokens_.emplace_back(1, static_cast<char>(b));
}

const std::string& BpeVocab::token_text(TokenId id) const {
  if (id >= tokens_.size()) throw UnknownTokenId(id, tokens_.size());
  return tokens_[id];
}

std::size_t BpeVocab::rank_of(TokenId left, TokenId right) const {
  auto it = pair_rank_.find(pack_pair(left, right));
  return it == pair_rank_.end() ? std::string::npos : it->second;
}

TokenId BpeVocab::add_merge(TokenId left, TokenId right) {
  token_text(left);  // bounds checks
  token_text(right);
  merges_.push_back({left, right});
  pair_rank_.emplace(pack_pair(left, right), merges_.size() - 1);
  tokens_.push_back(tokens_[left] + tokens_[right]);
  return static_cast<TokenId>(tokens_.size() - 1);
}

std::string BpeVocab::to_json() const {
  nlohmann::ordered_json doc;
  doc["alphabet_size"] = kAlphabetSize;
  nlohmann::ordered_json merges = nlohmann::ordered_json::array();
  for (const MergePair& merge : merges_) {
    nlohmann::ordered_json left = nlohmann::ordered_json::array();
    for (unsigned char c : tokens_[merge.left]) left.push_back(c);
    nlohmann::ordered_json right = nlohmann::ordered_json::array();
    for (unsigned char c : tokens_[merge.right]) right.push_back(c);
    merges.push_back(nlohmann::ordered_json::array({left, right}));
  }
  doc["merges"] = std::move(merges);
  if (provenance.target_vocab != 0 || !provenance.corpus.empty()) {
    doc["provenance"] = {{"target_vocab", provenance.target_vocab},
                         {"corpus", provenance.corpus}};
  }
  return doc.dump();
}

BpeVocab BpeVocab::from_json(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (doc.at("alphabet_size").get<std::size_t>() != kAlphabetSize)
    throw Error("vocab alphabet size must be 256");

  BpeVocab vocab;
  std::unordered_map<std::string, TokenId> by_text;
  for (TokenId id = 0; id < kAlphabetSize; ++id)
    by_text.emplace(vocab.tokens_[id], id);

  for (const auto& merge : doc.at("merges")) {
    std::string left_text, right_text;
    for (const auto& b : merge.at(0))
      left_text += static_cast<char>(b.get<unsigned>());
    for (const auto& b : merge.at(1))
      right_text += static_cast<char>(b.get<unsigned>());
    auto left = by_text.find(left_text);
    auto right = by_text.find(right_text);
    if (left == by_text.end() || right == by_text.end())
      throw Error("vocab merge references a token not yet defined");
    TokenId id = vocab.add_merge(left->second, right->second);
    by_text.emplace(vocab.tokens_[id], id);
  }
  if (doc.contains("provenance")) {
    const auto& prov = doc["provenance"];
    vocab.provenance.target_vocab = prov.value("target_vocab", std::size_t{0});
    vocab.provenance.corpus =
        prov.value("corpus", std::vector<std::string>{});
  }
  return vocab;
}

void BpeVocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json() << '\n';
}

BpeVocab BpeVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

BpeVocab train(std::span<const std::string> corpus, std::size_t target_vocab,
               int threads) {
  if (target_vocab < kAlphabetSize) throw TargetTooSmall(target_vocab);
  if (threads <= 0) threads = omp_get_max_threads();

  // Newline-delimited spans, deduplicated with multiplicities and sorted
  // so the working set is independent of document order quirks.
  std::map<std::string_view, std::int64_t> span_counts;
  for (const std::string& doc : corpus) {
    std::size_t start = 0;
    while (start <= doc.size()) {
      std::size_t nl = doc.find('\n', start);
      std::size_t end = nl == std::string::npos ? doc.size() : nl;
      if (end > start)
        ++span_counts[std::string_view(doc).substr(start, end - start)];
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  std::vector<Word> words;
  words.reserve(span_counts.size());
  for (const auto& [span, count] : span_counts) {
    Word word;
    word.count = count;
    word.tokens.reserve(span.size());
    for (unsigned char c : span) word.tokens.push_back(c);
    words.push_back(std::move(word));
  }

  BpeVocab vocab;
  PairCounts counts;

  // Initial pair counts, sharded across words.
  #pragma omp parallel num_threads(threads)
  {
    PairCounts local;
    #pragma omp for schedule(static) nowait
    for (std::ptrdiff_t w = 0; w < std::ptrdiff_t(words.size()); ++w)
      count_word_pairs(words[w], local, +1);
    #pragma omp critical(abctok_bpe_reduce)
    merge_counts(counts, local);
  }

  while (vocab.size() < target_vocab) {
    Candidate best;
    best.count = 0;
    for (const auto& [key, count] : counts) {
      if (count <= 0) continue;
      Candidate cand{key, count};
      if (best.count == 0 || better(cand, best, vocab)) best = cand;
    }
    if (best.count < 2) break;

    const TokenId left = static_cast<TokenId>(best.key >> 32);
    const TokenId right = static_cast<TokenId>(best.key);
    const TokenId merged = vocab.add_merge(left, right);

    // Rewrite affected words; pair-count deltas are the difference between
    // each word's old and new adjacency counts.
    PairCounts delta;
    #pragma omp parallel num_threads(threads)
    {
      PairCounts local;
      #pragma omp for schedule(static) nowait
      for (std::ptrdiff_t w = 0; w < std::ptrdiff_t(words.size()); ++w) {
        if (!contains_pair(words[w], left, right)) continue;
        count_word_pairs(words[w], local, -1);
        apply_merge(words[w], left, right, merged);
        count_word_pairs(words[w], local, +1);
      }
      #pragma omp critical(abctok_bpe_reduce)
      merge_counts(delta, local);
    }
    for (const auto& [key, change] : delta) {
      auto it = counts.find(key);
      if (it == counts.end()) {
        if (change > 0) counts.emplace(key, change);
        continue;
      }
      it->second += change;
      if (it->second <= 0) counts.erase(it);
    }
  }

  vocab.provenance.target_vocab = target_vocab;
  return vocab;
}

std::vector<TokenId> encode(std::string_view text, const BpeVocab& vocab) {
  std::vector<TokenId> out;
  out.reserve(text.size());
  std::vector<TokenId> span;

  auto encode_span = [&](std::string_view bytes) {
    span.clear();
    for (unsigned char c : bytes) span.push_back(c);
    while (span.size() >= 2) {
      // lowest-rank pair present, then replace all its occurrences
      std::size_t best_rank = std::string::npos;
      for (std::size_t i = 0; i + 1 < span.size(); ++i) {
        std::size_t rank = vocab.rank_of(span[i], span[i + 1]);
        if (rank < best_rank) best_rank = rank;
      }
      if (best_rank == std::string::npos) break;
      const MergePair merge = vocab.merges()[best_rank];
      std::size_t w = 0;
      for (std::size_t i = 0; i < span.size();) {
        if (i + 1 < span.size() && span[i] == merge.left &&
            span[i + 1] == merge.right) {
          span[w++] = vocab.merged_id(best_rank);
          i += 2;
        } else {
          span[w++] = span[i++];
        }
      }
      span.resize(w);
    }
    out.insert(out.end(), span.begin(), span.end());
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    if (end > start) encode_span(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    out.push_back('\n');
    start = nl + 1;
  }
  return out;
}

std::string decode(std::span<const TokenId> ids, const BpeVocab& vocab) {
  std::string out;
  for (TokenId id : ids) out += vocab.token_text(id);
  return out;
}

}  // namespace abctok::bpe
