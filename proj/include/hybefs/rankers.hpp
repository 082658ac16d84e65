#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybefs/matrix.hpp"
#include "hybefs/ranking.hpp"

namespace hybefs {

/// The five base rankers.
enum class Algorithm { gr, su, relieff, geode, wx };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::gr, Algorithm::su, Algorithm::relieff,
                                               Algorithm::geode, Algorithm::wx};

std::string_view to_string(Algorithm a);
/// Accepts the short names (gr, su, relieff, geode, wx), case-insensitive.
std::optional<Algorithm> parse_algorithm(std::string_view name);
/// Display name used in strategy labels ("GR", "ReliefF", ...).
std::string_view display_name(Algorithm a);

struct RankerParams {
  std::size_t bins = 10;          // GR / SU discretization
  std::size_t k_neighbors = 10;   // ReliefF
  double gamma = 0.5;             // GeoDE covariance shrinkage
  double var_fraction = 0.95;     // GeoDE retained variance
  std::size_t epochs = 100;       // Wx
  double learning_rate = 0.01;    // Wx
};

/// Equal-frequency bins: a value's bin is floor(first_rank * bins / n),
/// where first_rank is the 0-based sorted position of its first copy.
/// Equal values share a bin; bins are renumbered to be consecutive.
std::vector<std::size_t> discretize_equal_frequency(std::span<const double> column,
                                                    std::size_t bins);

/// Shannon entropy in bits of a discrete sequence.
double entropy(std::span<const std::size_t> values);

/// IG(Y; X) for a discrete feature and binary labels, in bits.
double information_gain(std::span<const std::size_t> bins, std::span<const Label> labels);

FeatureRanking gain_ratio_rank(const ExpressionMatrix& m, std::size_t bins = 10);
FeatureRanking symmetrical_uncertainty_rank(const ExpressionMatrix& m, std::size_t bins = 10);
FeatureRanking relieff_rank(const ExpressionMatrix& m, std::size_t k_neighbors = 10);
FeatureRanking geode_rank(const ExpressionMatrix& m, double gamma = 0.5,
                          double var_fraction = 0.95);
FeatureRanking wx_rank(const ExpressionMatrix& m, std::size_t epochs = 100,
                       double learning_rate = 0.01);

FeatureRanking run_ranker(Algorithm a, const ExpressionMatrix& m, const RankerParams& params = {});

/// Feature indices sorted by column content (lexicographic), ties by index.
/// Summing per-feature terms in this order makes a result independent of
/// how the columns were ordered on input.
std::vector<std::size_t> canonical_feature_order(const ExpressionMatrix& m);

}  // namespace hybefs
