#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybefs/matrix.hpp"
#include "hybefs/resampling.hpp"
#include "hybefs/strategies.hpp"

namespace hybefs {

// ---------------------------------------------------------------------------
// Gradient boosting classifier
// ---------------------------------------------------------------------------

struct GbmParams {
  std::size_t trees = 100;
  std::size_t depth = 3;
  double learning_rate = 0.1;
  std::size_t min_leaf = 2;
};

struct TreeNode {
  static constexpr std::uint32_t kLeaf = 0xFFFFFFFFu;
  std::uint32_t feature = kLeaf;
  double threshold = 0.0;  // x <= threshold goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;      // leaves only
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(const ExpressionMatrix& x, std::size_t sample) const;
};

struct BoostedModel {
  double initial_score = 0.0;  // log-odds of the positive class
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;
  std::size_t n_features = 0;

  /// Raw additive score F(x) for one sample.
  double decision(const ExpressionMatrix& x, std::size_t sample) const;
};

/// Logistic-loss boosting with exact greedy squared-error splits on the
/// residuals y - p and Newton leaf values clamped to [-4, 4].
BoostedModel gbm_train(const ExpressionMatrix& x, const GbmParams& params = {});

std::vector<double> predict_proba(const BoostedModel& model, const ExpressionMatrix& x);

// ---------------------------------------------------------------------------
// Ranking metrics
// ---------------------------------------------------------------------------

/// Mann-Whitney estimate with midranks (ties count one half).
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

/// Average precision; samples with equal scores form one block.
double pr_auc(std::span<const double> scores, std::span<const Label> labels);

// ---------------------------------------------------------------------------
// Cross-validated experiment
// ---------------------------------------------------------------------------

/// [1..50] followed by 75, 100, 200 and 500.
std::vector<std::size_t> default_thresholds();

struct MetricRecord {
  std::string strategy;
  std::size_t fold = 0;
  std::size_t threshold = 0;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
};

struct StabilityRecord {
  std::string strategy;
  std::size_t threshold = 0;
  double kuncheva = 0.0;
};

struct ExperimentOptions {
  std::size_t folds = 5;
  std::vector<std::size_t> thresholds = default_thresholds();
  std::uint64_t seed = 42;
  RankerParams rankers;
  GbmParams gbm;
  /// When false only rankings and stability are produced.
  bool classify = true;
  bool allow_degenerate = false;
  /// Sees every row set handed to rankers ("ranker_input"), to the
  /// classifier ("trainer_input") and used for scoring ("test_eval").
  AuditHook audit;
};

struct ExperimentResult {
  std::vector<MetricRecord> metrics;       // (strategy, fold, threshold) order
  std::vector<StabilityRecord> stability;  // (strategy, threshold) order
  std::vector<std::vector<StrategyOutput>> outputs;  // [strategy][fold]
  FoldAssignment folds;
  std::vector<SampleIndexSet> balanced_train;        // per fold, dataset row ids
  std::size_t ranker_calls = 0;
};

/// Stream tags, so callers can reproduce individual stages.
enum class SeedPurpose : std::uint64_t { folds = 1, downsample = 2, bags = 3 };

ExperimentResult run_experiment(const ExpressionMatrix& data, std::span<const StrategySpec> specs,
                                const ExperimentOptions& options = {});

}  // namespace hybefs
