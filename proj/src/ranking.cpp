#include "hybefs/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hybefs/error.hpp"

namespace hybefs {

FeatureRanking FeatureRanking::from_scores(std::vector<double> scores) {
  for (std::size_t f = 0; f < scores.size(); ++f) {
    if (!std::isfinite(scores[f])) {
      fail(ErrorKind::runtime, "non-finite relevance score for feature " + std::to_string(f));
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return {std::move(scores), std::move(order)};
}

std::vector<std::size_t> FeatureRanking::positions() const {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) pos[order[r]] = r + 1;
  return pos;
}

bool is_consistent(const FeatureRanking& ranking) {
  const std::size_t n = ranking.scores.size();
  if (ranking.order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto f : ranking.order) {
    if (f >= n || seen[f]) return false;
    seen[f] = true;
  }
  for (std::size_t r = 1; r < n; ++r) {
    const auto a = ranking.order[r - 1];
    const auto b = ranking.order[r];
    if (ranking.scores[a] < ranking.scores[b]) return false;
    if (ranking.scores[a] == ranking.scores[b] && a > b) return false;
  }
  return true;
}

}  // namespace hybefs
