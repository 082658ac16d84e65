#include "hybefs/aggregation.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "hybefs/error.hpp"
#include "hybefs/stability.hpp"

namespace hybefs {

void RankingGrid::validate() const {
  if (cells.empty() || cells.front().empty()) fail(ErrorKind::runtime, "empty ranking grid");
  const std::size_t m = cells.front().size();
  const std::size_t nf = cells.front().front().size();
  for (std::size_t b = 0; b < cells.size(); ++b) {
    if (cells[b].size() != m) {
      fail(ErrorKind::runtime, "ranking grid row " + std::to_string(b) + " has " +
                                   std::to_string(cells[b].size()) + " algorithms, expected " +
                                   std::to_string(m));
    }
    for (const auto& r : cells[b]) {
      if (r.size() != nf) fail(ErrorKind::runtime, "ranking grid mixes feature universes");
    }
  }
  if (!algorithm_names.empty() && algorithm_names.size() != m) {
    fail(ErrorKind::runtime, "ranking grid algorithm names do not match its width");
  }
}

FeatureRanking weighted_borda_aggregate(std::span<const FeatureRanking> rankings,
                                        std::span<const double> weights) {
  if (rankings.empty()) fail(ErrorKind::runtime, "nothing to aggregate");
  if (weights.size() != rankings.size()) fail(ErrorKind::runtime, "one weight per ranking required");
  const std::size_t nf = rankings.front().size();

  // Points are summed exactly as integers within each group of equal
  // weight, then scaled once per group. Uniform weights therefore give
  // exactly the plain Borda scores times a constant.
  std::vector<double> distinct(weights.begin(), weights.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> scores(nf, 0.0);
  std::vector<std::uint64_t> points(nf);
  for (double w : distinct) {
    std::fill(points.begin(), points.end(), 0);
    for (std::size_t j = 0; j < rankings.size(); ++j) {
      if (weights[j] != w) continue;
      const auto& order = rankings[j].order;
      if (order.size() != nf) fail(ErrorKind::runtime, "rankings cover different feature universes");
      // order[r] sits at 1-based position r + 1 and earns nf - (r + 1) points.
      for (std::size_t r = 0; r < nf; ++r) points[order[r]] += nf - r - 1;
    }
    for (std::size_t f = 0; f < nf; ++f) scores[f] += static_cast<double>(points[f]) * w;
  }
  return FeatureRanking::from_scores(std::move(scores));
}

FeatureRanking borda_aggregate(std::span<const FeatureRanking> rankings) {
  const std::vector<double> ones(rankings.size(), 1.0);
  return weighted_borda_aggregate(rankings, ones);
}

std::vector<double> kuncheva_weights(const RankingGrid& grid, std::size_t th) {
  grid.validate();
  const std::size_t nf = grid.n_features();
  if (th < 1 || th >= nf) {
    fail(ErrorKind::config, "stability threshold " + std::to_string(th) + " outside [1, " +
                                std::to_string(nf) + ")");
  }
  if (grid.n_bootstraps() < 2) {
    fail(ErrorKind::config, "stability weighting needs at least two bootstraps");
  }
  std::vector<double> weights(grid.n_algorithms());
  std::vector<SelectionSet> sets(grid.n_bootstraps());
  for (std::size_t j = 0; j < grid.n_algorithms(); ++j) {
    for (std::size_t b = 0; b < grid.n_bootstraps(); ++b) sets[b] = select_top(grid.cells[b][j], th);
    weights[j] = stability_weight(kuncheva_index(sets));
  }
  return weights;
}

std::vector<FeatureRanking> stability_weighted_fam(const RankingGrid& grid, std::size_t th) {
  const auto weights = kuncheva_weights(grid, th);
  std::vector<FeatureRanking> out;
  out.reserve(grid.n_bootstraps());
  for (const auto& row : grid.cells) out.push_back(weighted_borda_aggregate(row, weights));
  return out;
}

FeatureRanking two_stage_aggregate(const RankingGrid& grid, FirstStage fam, SecondStage sam) {
  grid.validate();
  std::vector<FeatureRanking> per_bootstrap;
  if (fam.method == FirstStage::Method::stability_weighted) {
    per_bootstrap = stability_weighted_fam(grid, fam.threshold);
  } else {
    per_bootstrap.reserve(grid.n_bootstraps());
    for (const auto& row : grid.cells) per_bootstrap.push_back(borda_aggregate(row));
  }
  switch (sam) {
    case SecondStage::borda: break;
  }
  return borda_aggregate(per_bootstrap);
}

}  // namespace hybefs
