#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybefs/ranking.hpp"

namespace hybefs {

/// The top-th features of a ranking, drawn from a universe of n features.
struct SelectionSet {
  std::vector<std::size_t> features;  // sorted ascending
  std::size_t n = 0;                  // feature-universe size

  std::size_t k() const noexcept { return features.size(); }
};

SelectionSet make_selection(std::vector<std::size_t> features, std::size_t universe);

SelectionSet select_top(const FeatureRanking& ranking, std::size_t th);

/// Chance-corrected overlap of two equal-size subsets:
/// (r*n - k^2) / (k*(n - k)) with r = |A & B|.
double consistency_index(const SelectionSet& a, const SelectionSet& b);

/// Mean pairwise consistency index over N >= 2 subsets.
double kuncheva_index(std::span<const SelectionSet> sets);

/// Conventional "high stability" reading, used for labelling only.
inline bool is_high_stability(double ki) { return ki > 0.5; }

}  // namespace hybefs
