#include "hybefs/stability.hpp"

#include <algorithm>
#include <string>

#include "hybefs/error.hpp"

namespace hybefs {

SelectionSet make_selection(std::vector<std::size_t> features, std::size_t universe) {
  std::sort(features.begin(), features.end());
  if (std::adjacent_find(features.begin(), features.end()) != features.end()) {
    fail(ErrorKind::runtime, "selection contains a repeated feature");
  }
  if (!features.empty() && features.back() >= universe) {
    fail(ErrorKind::runtime, "selected feature outside the universe");
  }
  return {std::move(features), universe};
}

SelectionSet select_top(const FeatureRanking& ranking, std::size_t th) {
  if (th < 1 || th >= ranking.size()) {
    fail(ErrorKind::config, "threshold " + std::to_string(th) + " outside [1, " +
                                std::to_string(ranking.size()) + ")");
  }
  return make_selection({ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(th)},
                        ranking.size());
}

double consistency_index(const SelectionSet& a, const SelectionSet& b) {
  const std::size_t k = a.k();
  const std::size_t n = a.n;
  if (b.k() != k || b.n != n) fail(ErrorKind::runtime, "consistency index needs equal k and n");
  if (k == 0 || k >= n) {
    fail(ErrorKind::runtime, "consistency index undefined for k = " + std::to_string(k) +
                                 ", n = " + std::to_string(n));
  }
  std::size_t r = 0;
  auto ia = a.features.begin();
  auto ib = b.features.begin();
  while (ia != a.features.end() && ib != b.features.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else {
      ++r;
      ++ia;
      ++ib;
    }
  }
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return (static_cast<double>(r) * nd - kd * kd) / (kd * (nd - kd));
}

double kuncheva_index(std::span<const SelectionSet> sets) {
  const std::size_t count = sets.size();
  if (count < 2) fail(ErrorKind::runtime, "Kuncheva index needs at least two subsets");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) sum += consistency_index(sets[i], sets[j]);
  }
  return 2.0 * sum / (static_cast<double>(count) * static_cast<double>(count - 1));
}

}  // namespace hybefs
