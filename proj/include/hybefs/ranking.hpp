#pragma once

#include <cstddef>
#include <vector>

namespace hybefs {

/// Total order over all features, most relevant first.
///
/// `order` sorts features by descending score with ties broken by ascending
/// feature index. Borda points depend on exact positions, so the tie-break is
/// part of the contract.
struct FeatureRanking {
  std::vector<double> scores;
  std::vector<std::size_t> order;

  static FeatureRanking from_scores(std::vector<double> scores);

  std::size_t size() const noexcept { return order.size(); }

  /// 1-based position of every feature (position[f] == 1 for order[0]).
  std::vector<std::size_t> positions() const;
};

/// Checks that `order` is a permutation consistent with `scores`.
bool is_consistent(const FeatureRanking& ranking);

}  // namespace hybefs
