#include <algorithm>
#include <numeric>

#include "hybefs/error.hpp"
#include "hybefs/kernels.hpp"
#include "hybefs/rankers.hpp"

namespace hybefs {

// Deterministic ReliefF: every sample acts once as the reference instance.
// Neighbours are found under the range-scaled Manhattan distance with ties
// broken by ascending sample index.
FeatureRanking relieff_rank(const ExpressionMatrix& m, std::size_t k_neighbors) {
  require_both_classes(m, 2);
  if (k_neighbors == 0) fail(ErrorKind::config, "ReliefF needs k_neighbors >= 1");
  const std::size_t n = m.n_samples();
  const std::size_t k =
      std::min(k_neighbors, std::min(m.count_label(0), m.count_label(1)) - 1);

  const kernels::ColumnBlock x{m.raw(), n, m.n_features()};
  std::vector<double> range(m.n_features());
  for (std::size_t f = 0; f < m.n_features(); ++f) {
    const auto col = m.column(f);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    range[f] = *hi - *lo;
  }
  const auto dist = kernels::range_scaled_manhattan(x, range);

  const auto labels = m.labels();
  std::vector<std::size_t> hits(n * k);
  std::vector<std::size_t> misses(n * k);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto s = static_cast<std::size_t>(i);
    const double* d = dist.data() + s * n;
    auto nearer = [d](std::size_t a, std::size_t b) {
      return d[a] < d[b] || (d[a] == d[b] && a < b);
    };
    std::vector<std::size_t> same;
    std::vector<std::size_t> other;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == s) continue;
      (labels[j] == labels[s] ? same : other).push_back(j);
    }
    std::partial_sort(same.begin(), same.begin() + static_cast<std::ptrdiff_t>(k), same.end(), nearer);
    std::partial_sort(other.begin(), other.begin() + static_cast<std::ptrdiff_t>(k), other.end(), nearer);
    std::copy_n(same.begin(), k, hits.begin() + static_cast<std::ptrdiff_t>(s * k));
    std::copy_n(other.begin(), k, misses.begin() + static_cast<std::ptrdiff_t>(s * k));
  }

  return FeatureRanking::from_scores(kernels::relieff_weights(x, range, hits, misses, k));
}

}  // namespace hybefs
