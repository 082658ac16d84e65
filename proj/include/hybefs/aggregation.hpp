#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hybefs/ranking.hpp"

namespace hybefs {

/// n bootstraps x m algorithms of complete rankings over one feature universe.
struct RankingGrid {
  std::vector<std::vector<FeatureRanking>> cells;  // cells[bootstrap][algorithm]
  std::vector<std::string> algorithm_names;

  std::size_t n_bootstraps() const noexcept { return cells.size(); }
  std::size_t n_algorithms() const noexcept { return cells.empty() ? 0 : cells.front().size(); }
  std::size_t n_features() const noexcept {
    return cells.empty() || cells.front().empty() ? 0 : cells.front().front().size();
  }

  /// Throws unless the grid is rectangular, non-empty and every ranking
  /// covers the same number of features.
  void validate() const;
};

/// Borda count: every ranking awards N_f - position points (positions are
/// 1-based). Output scores are the summed points.
FeatureRanking borda_aggregate(std::span<const FeatureRanking> rankings);

/// Weighted Borda: ranking j's points are multiplied by weights[j].
FeatureRanking weighted_borda_aggregate(std::span<const FeatureRanking> rankings,
                                        std::span<const double> weights);

/// Per algorithm: (KI + 1)^5, KI taken over the top-th sets of its n
/// bootstrap rankings.
std::vector<double> kuncheva_weights(const RankingGrid& grid, std::size_t th);

inline double stability_weight(double ki) {
  const double t = ki + 1.0;
  return t * t * t * t * t;
}

/// First stage of the stability-weighted hybrid: one consensus per bootstrap.
std::vector<FeatureRanking> stability_weighted_fam(const RankingGrid& grid, std::size_t th);

struct FirstStage {
  enum class Method { borda, stability_weighted };
  Method method = Method::borda;
  std::size_t threshold = 0;  // used by stability_weighted only

  static FirstStage borda() { return {Method::borda, 0}; }
  static FirstStage stability_weighted(std::size_t th) { return {Method::stability_weighted, th}; }
};

/// Only Borda is offered as second stage.
enum class SecondStage { borda };

/// FAM collapses each bootstrap's m rankings, SAM collapses the n results.
FeatureRanking two_stage_aggregate(const RankingGrid& grid, FirstStage fam,
                                   SecondStage sam = SecondStage::borda);

}  // namespace hybefs
