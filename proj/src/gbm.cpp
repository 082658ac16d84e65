#include <algorithm>
#include <cmath>
#include <numeric>

#include "hybefs/error.hpp"
#include "hybefs/evaluation.hpp"

namespace hybefs {

namespace {

constexpr double kLeafClamp = 4.0;
constexpr double kMinGain = 1e-12;

double sigmoid(double f) { return 1.0 / (1.0 + std::exp(-f)); }

struct SplitChoice {
  double gain = kMinGain;
  std::uint32_t feature = TreeNode::kLeaf;
  double threshold = 0.0;
};

// Grows one tree level by level. Every level scans each feature once in
// presorted order, updating the running left-hand sums of whichever
// frontier node each sample belongs to.
RegressionTree fit_tree(const ExpressionMatrix& x,
                        const std::vector<std::vector<std::size_t>>& sorted,
                        std::span<const double> resid, std::span<const double> hess,
                        const GbmParams& params) {
  const std::size_t n = x.n_samples();
  constexpr std::uint32_t kNone = TreeNode::kLeaf;
  RegressionTree tree;
  tree.nodes.emplace_back();
  std::vector<std::uint32_t> node_of(n, 0);
  std::vector<std::uint32_t> frontier{0};

  for (std::size_t level = 0; level < params.depth && !frontier.empty(); ++level) {
    // Slot of each frontier node, by node id.
    std::vector<std::uint32_t> slot(tree.nodes.size(), kNone);
    for (std::uint32_t i = 0; i < frontier.size(); ++i) slot[frontier[i]] = i;
    const std::size_t width = frontier.size();

    std::vector<double> total(width, 0.0);
    std::vector<std::size_t> count(width, 0);
    for (std::size_t s = 0; s < n; ++s) {
      const auto v = node_of[s] < slot.size() ? slot[node_of[s]] : kNone;
      if (v == kNone) continue;
      total[v] += resid[s];
      ++count[v];
    }

    std::vector<SplitChoice> best(width);
    std::vector<double> left_sum(width);
    std::vector<std::size_t> left_count(width);
    std::vector<double> last(width);
    for (std::uint32_t f = 0; f < x.n_features(); ++f) {
      std::fill(left_sum.begin(), left_sum.end(), 0.0);
      std::fill(left_count.begin(), left_count.end(), 0);
      const auto col = x.column(f);
      for (std::size_t s : sorted[f]) {
        const auto v = node_of[s] < slot.size() ? slot[node_of[s]] : kNone;
        if (v == kNone) continue;
        const double value = col[s];
        if (left_count[v] > 0 && value > last[v] && left_count[v] >= params.min_leaf &&
            count[v] - left_count[v] >= params.min_leaf) {
          const double nl = static_cast<double>(left_count[v]);
          const double nr = static_cast<double>(count[v] - left_count[v]);
          const double sr = total[v] - left_sum[v];
          const double gain = left_sum[v] * left_sum[v] / nl + sr * sr / nr -
                              total[v] * total[v] / static_cast<double>(count[v]);
          if (gain > best[v].gain) {
            double threshold = last[v] + (value - last[v]) / 2.0;
            if (!(threshold < value)) threshold = last[v];
            best[v] = {gain, f, threshold};
          }
        }
        left_sum[v] += resid[s];
        ++left_count[v];
        last[v] = value;
      }
    }

    std::vector<std::uint32_t> next;
    for (std::size_t i = 0; i < width; ++i) {
      if (best[i].feature == kNone) continue;
      const std::uint32_t id = frontier[i];
      const auto left = static_cast<std::uint32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[id];
      node.feature = best[i].feature;
      node.threshold = best[i].threshold;
      node.left = left;
      node.right = left + 1;
      next.push_back(left);
      next.push_back(left + 1);
    }
    for (std::size_t s = 0; s < n; ++s) {
      const TreeNode& node = tree.nodes[node_of[s]];
      if (node.feature == kNone) continue;
      node_of[s] = x.at(s, node.feature) <= node.threshold ? node.left : node.right;
    }
    frontier = std::move(next);
  }

  std::vector<double> g(tree.nodes.size(), 0.0);
  std::vector<double> h(tree.nodes.size(), 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    g[node_of[s]] += resid[s];
    h[node_of[s]] += hess[s];
  }
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    auto& node = tree.nodes[id];
    if (node.feature != kNone) continue;
    node.value = h[id] > 0.0 ? std::clamp(g[id] / h[id], -kLeafClamp, kLeafClamp) : 0.0;
  }
  return tree;
}

}  // namespace

double RegressionTree::evaluate(const ExpressionMatrix& x, std::size_t sample) const {
  std::uint32_t id = 0;
  while (nodes[id].feature != TreeNode::kLeaf) {
    const TreeNode& node = nodes[id];
    id = x.at(sample, node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[id].value;
}

double BoostedModel::decision(const ExpressionMatrix& x, std::size_t sample) const {
  double f = initial_score;
  for (const auto& tree : trees) f += learning_rate * tree.evaluate(x, sample);
  return f;
}

BoostedModel gbm_train(const ExpressionMatrix& x, const GbmParams& params) {
  require_both_classes(x, 1);
  if (params.min_leaf < 1) fail(ErrorKind::config, "min_leaf must be at least 1");
  const std::size_t n = x.n_samples();
  const double pos = static_cast<double>(x.count_label(1));
  const double neg = static_cast<double>(x.count_label(0));

  BoostedModel model;
  model.initial_score = std::log(pos / neg);
  model.learning_rate = params.learning_rate;
  model.n_features = x.n_features();

  std::vector<std::vector<std::size_t>> sorted(x.n_features());
  for (std::size_t f = 0; f < x.n_features(); ++f) {
    auto& order = sorted[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto col = x.column(f);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
  }

  std::vector<double> score(n, model.initial_score);
  std::vector<double> resid(n);
  std::vector<double> hess(n);
  const auto labels = x.labels();
  for (std::size_t t = 0; t < params.trees; ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      const double p = sigmoid(score[s]);
      resid[s] = static_cast<double>(labels[s]) - p;
      hess[s] = p * (1.0 - p);
    }
    RegressionTree tree = fit_tree(x, sorted, resid, hess, params);
    for (std::size_t s = 0; s < n; ++s) score[s] += params.learning_rate * tree.evaluate(x, s);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> predict_proba(const BoostedModel& model, const ExpressionMatrix& x) {
  if (x.n_features() != model.n_features) {
    fail(ErrorKind::runtime, "model expects " + std::to_string(model.n_features) +
                                 " features, got " + std::to_string(x.n_features()));
  }
  std::vector<double> out(x.n_samples());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = sigmoid(model.decision(x, s));
  return out;
}

}  // namespace hybefs
