#include <algorithm>
#include <numeric>

#include "hybefs/error.hpp"
#include "hybefs/evaluation.hpp"

namespace hybefs {

namespace {

std::vector<std::size_t> descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

void check_sizes(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) fail(ErrorKind::runtime, "scores and labels differ in length");
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  check_sizes(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the midrank keeps the rank sum integral.
  std::uint64_t twice_rank_sum = 0;
  std::uint64_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const std::uint64_t twice_midrank = i + 1 + j;  // (i+1) + j == 2 * mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        twice_rank_sum += twice_midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::uint64_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) fail(ErrorKind::runtime, "ROC AUC needs both classes");
  const double u = static_cast<double>(twice_rank_sum) / 2.0 -
                   static_cast<double>(n_pos) * static_cast<double>(n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double pr_auc(std::span<const double> scores, std::span<const Label> labels) {
  check_sizes(scores, labels);
  const auto total_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label{1}));
  if (total_pos == 0) fail(ErrorKind::runtime, "PR AUC needs at least one positive");
  const auto order = descending(scores);
  std::size_t tp = 0;
  std::size_t seen = 0;
  double ap = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t block_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      block_pos += labels[order[j]];
      ++j;
    }
    tp += block_pos;
    seen = j;
    if (block_pos > 0) {
      const double precision = static_cast<double>(tp) / static_cast<double>(seen);
      ap += static_cast<double>(block_pos) / static_cast<double>(total_pos) * precision;
    }
    i = j;
  }
  return ap;
}

}  // namespace hybefs
