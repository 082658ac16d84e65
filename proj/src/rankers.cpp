#include "hybefs/rankers.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace hybefs {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gr: return "gr";
    case Algorithm::su: return "su";
    case Algorithm::relieff: return "relieff";
    case Algorithm::geode: return "geode";
    case Algorithm::wx: return "wx";
  }
  return "?";
}

std::string_view display_name(Algorithm a) {
  switch (a) {
    case Algorithm::gr: return "GR";
    case Algorithm::su: return "SU";
    case Algorithm::relieff: return "ReliefF";
    case Algorithm::geode: return "GeoDE";
    case Algorithm::wx: return "Wx";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Algorithm a : kAllAlgorithms) {
    if (lower == to_string(a)) return a;
  }
  return std::nullopt;
}

FeatureRanking run_ranker(Algorithm a, const ExpressionMatrix& m, const RankerParams& params) {
  switch (a) {
    case Algorithm::gr: return gain_ratio_rank(m, params.bins);
    case Algorithm::su: return symmetrical_uncertainty_rank(m, params.bins);
    case Algorithm::relieff: return relieff_rank(m, params.k_neighbors);
    case Algorithm::geode: return geode_rank(m, params.gamma, params.var_fraction);
    case Algorithm::wx: return wx_rank(m, params.epochs, params.learning_rate);
  }
  return {};
}

std::vector<std::size_t> canonical_feature_order(const ExpressionMatrix& m) {
  std::vector<std::size_t> order(m.n_features());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ca = m.column(a);
    const auto cb = m.column(b);
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
  return order;
}

}  // namespace hybefs
