// Serial reference BPE trainer: recounts every pair from scratch on every
// iteration and rewrites the whole corpus per merge. Slow on purpose; it is
// the ground truth the incremental OpenMP trainer is checked against and
// the baseline the benchmark compares with. Not linked into the CLI.
#pragma once

#include <span>
#include <string>

#include "abctok/bpe.hpp"

namespace abctok::reference {

bpe::BpeVocab train_reference(std::span<const std::string> corpus,
                              std::size_t target_vocab);

}  // namespace abctok::reference
