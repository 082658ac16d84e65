#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "hybefs/matrix.hpp"

namespace hybefs {

/// Mixes a master seed with an ordered tag tuple into an independent seed.
/// Pure; distinct tuples (including reorderings) give distinct streams.
std::uint64_t derive_stream(std::uint64_t master_seed, std::span<const std::uint64_t> tags);
inline std::uint64_t derive_stream(std::uint64_t master_seed,
                                   std::initializer_list<std::uint64_t> tags) {
  return derive_stream(master_seed, std::span<const std::uint64_t>(tags.begin(), tags.size()));
}

using Rng = std::mt19937_64;

/// Unbiased integer in [0, bound). Bitwise identical on every standard
/// library, unlike std::uniform_int_distribution.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // per sample, in [0, k)
  std::size_t k = 0;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

using SampleIndexSet = std::vector<std::size_t>;

/// Per-class seeded shuffle, then round-robin fold assignment.
FoldAssignment stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

/// Keeps every minority index and an equally sized seeded subset of the
/// majority. The choice is keyed by index value, so it does not depend on
/// the order of `train`. Output is ascending.
SampleIndexSet downsample_balance(std::span<const std::size_t> train,
                                  std::span<const Label> labels, std::uint64_t seed);

/// Same-size draw with replacement from `train`. A bag holding only one
/// class is redrawn (up to 100 times) when the input itself has both.
SampleIndexSet bootstrap(std::span<const std::size_t> train, std::span<const Label> labels,
                         std::uint64_t seed);

inline constexpr int kBootstrapMaxRetries = 100;

}  // namespace hybefs
