#include <cmath>

#include "hybefs/error.hpp"
#include "hybefs/kernels.hpp"
#include "hybefs/rankers.hpp"

namespace hybefs {

// Two-output softmax regression on z-scored features, zero initialised and
// trained by full-batch gradient descent on mean cross-entropy.
//
// The discriminative index of feature i is its contribution to the logit
// margin between the two class centroids:
//   DI_i = |(w_i1 - w_i0) * (mean_i(class 1) - mean_i(class 0))|
FeatureRanking wx_rank(const ExpressionMatrix& m, std::size_t epochs, double learning_rate) {
  require_both_classes(m, 1);
  const std::size_t n = m.n_samples();
  const std::size_t p = m.n_features();
  const auto z = kernels::standardize_columns({m.raw(), n, p});
  const kernels::ColumnBlock x{z, n, p};
  const auto order = canonical_feature_order(m);
  const auto labels = m.labels();

  std::vector<double> w0(p, 0.0);
  std::vector<double> w1(p, 0.0);
  double b0 = 0.0;
  double b1 = 0.0;
  std::vector<double> logit0(n);
  std::vector<double> logit1(n);
  std::vector<double> resid0(n);
  std::vector<double> resid1(n);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::fill(logit0.begin(), logit0.end(), b0);
    std::fill(logit1.begin(), logit1.end(), b1);
    kernels::accumulate_linear(x, w0, order, logit0);
    kernels::accumulate_linear(x, w1, order, logit1);
    double grad_b0 = 0.0;
    double grad_b1 = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      // P(class 0) = 1 / (1 + exp(l1 - l0)); computing P(class 1) as its
      // complement keeps the two weight columns exact negatives.
      const double p0 = 1.0 / (1.0 + std::exp(logit1[s] - logit0[s]));
      const double p1 = 1.0 - p0;
      resid0[s] = p0 - (labels[s] == 0 ? 1.0 : 0.0);
      resid1[s] = p1 - (labels[s] == 1 ? 1.0 : 0.0);
      grad_b0 += resid0[s];
      grad_b1 += resid1[s];
    }
    const auto g0 = kernels::column_means_weighted(x, resid0);
    const auto g1 = kernels::column_means_weighted(x, resid1);
    for (std::size_t f = 0; f < p; ++f) {
      w0[f] -= learning_rate * g0[f];
      w1[f] -= learning_rate * g1[f];
    }
    b0 -= learning_rate * grad_b0 / static_cast<double>(n);
    b1 -= learning_rate * grad_b1 / static_cast<double>(n);
  }

  double count[2] = {0.0, 0.0};
  for (auto c : labels) count[c] += 1.0;
  std::vector<double> scores(p);
  for (std::size_t f = 0; f < p; ++f) {
    const auto col = x.column(f);
    double sum[2] = {0.0, 0.0};
    for (std::size_t s = 0; s < n; ++s) sum[labels[s]] += col[s];
    const double gap = sum[1] / count[1] - sum[0] / count[0];
    scores[f] = std::abs((w1[f] - w0[f]) * gap);
  }
  return FeatureRanking::from_scores(std::move(scores));
}

}  // namespace hybefs
