#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "hybefs/error.hpp"
#include "hybefs/rankers.hpp"

namespace hybefs {

namespace {

double entropy_of_counts(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

struct InfoTerms {
  double ig = 0.0;
  double h_x = 0.0;
};

InfoTerms info_terms(std::span<const std::size_t> bins, std::span<const Label> labels) {
  const std::size_t n = bins.size();
  const std::size_t n_bins = bins.empty() ? 0 : *std::max_element(bins.begin(), bins.end()) + 1;
  std::vector<std::array<std::size_t, 2>> table(n_bins, {0, 0});
  std::array<std::size_t, 2> class_counts{0, 0};
  for (std::size_t s = 0; s < n; ++s) {
    ++table[bins[s]][labels[s]];
    ++class_counts[labels[s]];
  }
  std::vector<std::size_t> bin_counts(n_bins);
  double conditional = 0.0;
  for (std::size_t v = 0; v < n_bins; ++v) {
    bin_counts[v] = table[v][0] + table[v][1];
    if (bin_counts[v] == 0) continue;
    const double pv = static_cast<double>(bin_counts[v]) / static_cast<double>(n);
    conditional += pv * entropy_of_counts(table[v], bin_counts[v]);
  }
  return {entropy_of_counts(class_counts, n) - conditional, entropy_of_counts(bin_counts, n)};
}

template <typename ScoreFn>
FeatureRanking info_rank(const ExpressionMatrix& m, std::size_t bins, ScoreFn score) {
  if (bins < 2) fail(ErrorKind::config, "discretization needs at least 2 bins");
  require_both_classes(m, 1);
  const std::array<std::size_t, 2> class_counts{m.count_label(0), m.count_label(1)};
  const double h_y = entropy_of_counts(class_counts, m.n_samples());
  std::vector<double> scores(m.n_features());
  const auto cols = static_cast<std::ptrdiff_t>(m.n_features());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t f = 0; f < cols; ++f) {
    const auto fu = static_cast<std::size_t>(f);
    const auto binned = discretize_equal_frequency(m.column(fu), bins);
    scores[fu] = score(info_terms(binned, m.labels()), h_y);
  }
  return FeatureRanking::from_scores(std::move(scores));
}

}  // namespace

std::vector<std::size_t> discretize_equal_frequency(std::span<const double> column,
                                                    std::size_t bins) {
  if (bins < 2) fail(ErrorKind::config, "discretization needs at least 2 bins");
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  std::vector<std::size_t> out(n);
  std::size_t first_rank = 0;
  std::size_t next_label = 0;
  std::size_t last_raw = static_cast<std::size_t>(-1);
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && column[order[r]] != column[order[r - 1]]) first_rank = r;
    const std::size_t raw = first_rank * bins / n;
    if (raw != last_raw) {
      if (last_raw != static_cast<std::size_t>(-1)) ++next_label;
      last_raw = raw;
    }
    out[order[r]] = next_label;
  }
  return out;
}

double entropy(std::span<const std::size_t> values) {
  if (values.empty()) fail(ErrorKind::runtime, "entropy of an empty sequence");
  std::vector<std::size_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return entropy_of_counts(counts, sorted.size());
}

double information_gain(std::span<const std::size_t> bins, std::span<const Label> labels) {
  return info_terms(bins, labels).ig;
}

FeatureRanking gain_ratio_rank(const ExpressionMatrix& m, std::size_t bins) {
  return info_rank(m, bins, [](InfoTerms t, double) { return t.h_x > 0.0 ? t.ig / t.h_x : 0.0; });
}

FeatureRanking symmetrical_uncertainty_rank(const ExpressionMatrix& m, std::size_t bins) {
  return info_rank(m, bins, [](InfoTerms t, double h_y) {
    const double denom = t.h_x + h_y;
    return denom > 0.0 ? 2.0 * t.ig / denom : 0.0;
  });
}

}  // namespace hybefs
