#include <algorithm>
#include <exception>

#include "hybefs/error.hpp"
#include "hybefs/evaluation.hpp"
#include "hybefs/stability.hpp"

namespace hybefs {

std::vector<std::size_t> default_thresholds() {
  std::vector<std::size_t> out;
  for (std::size_t th = 1; th <= 50; ++th) out.push_back(th);
  for (std::size_t th : {75, 100, 200, 500}) out.push_back(th);
  return out;
}

namespace {

std::uint64_t tag(SeedPurpose p) { return static_cast<std::uint64_t>(p); }

void validate_inputs(const ExpressionMatrix& data, std::span<const StrategySpec> specs,
                     const ExperimentOptions& options) {
  if (specs.empty()) fail(ErrorKind::config, "no strategies to run");
  if (options.thresholds.empty()) fail(ErrorKind::config, "no thresholds given");
  for (auto th : options.thresholds) {
    if (th < 1 || th >= data.n_features()) {
      fail(ErrorKind::config, "threshold " + std::to_string(th) + " must lie in [1, " +
                                  std::to_string(data.n_features()) + ")");
    }
  }
  std::vector<std::size_t> sorted = options.thresholds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorKind::config, "duplicate threshold");
  }
  std::vector<std::string> labels;
  for (const auto& spec : specs) {
    validate(spec, options.allow_degenerate);
    if (std::find(labels.begin(), labels.end(), spec.label) != labels.end()) {
      fail(ErrorKind::config, "duplicate strategy label '" + spec.label + "'");
    }
    labels.push_back(spec.label);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExpressionMatrix& data, std::span<const StrategySpec> specs,
                                const ExperimentOptions& options) {
  validate_inputs(data, specs, options);
  const std::size_t k = options.folds;
  const auto& thresholds = options.thresholds;
  const std::size_t n_th = thresholds.size();

  ExperimentResult result;
  result.folds = stratified_folds(data.labels(), k, derive_stream(options.seed, {tag(SeedPurpose::folds)}));
  result.outputs.assign(specs.size(), std::vector<StrategyOutput>(k));
  if (options.classify) result.metrics.resize(specs.size() * k * n_th);

  for (std::size_t fold = 0; fold < k; ++fold) {
    const auto train_rows = result.folds.train_indices(fold);
    const auto test_rows = result.folds.test_indices(fold);
    auto balanced = downsample_balance(train_rows, data.labels(),
                                       derive_stream(options.seed, {tag(SeedPurpose::downsample), fold}));
    const ExpressionMatrix train = data.select_rows(balanced);

    RankingCache cache(train, derive_stream(options.seed, {tag(SeedPurpose::bags)}), fold,
                       options.rankers, balanced, options.audit);
    try {
      cache.prefetch(specs);
      for (std::size_t s = 0; s < specs.size(); ++s) {
        result.outputs[s][fold] = run_strategy(cache, specs[s], thresholds, options.allow_degenerate);
      }
    } catch (const Error& e) {
      fail(e.kind(), "fold " + std::to_string(fold) + ": " + e.what());
    }
    result.ranker_calls += cache.ranker_calls();

    if (options.classify) {
      if (options.audit) {
        options.audit("trainer_input", balanced);
        options.audit("test_eval", test_rows);
      }
      const ExpressionMatrix test = data.select_rows(test_rows);
      const auto tasks = static_cast<std::ptrdiff_t>(specs.size() * n_th);
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(tasks));
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t t = 0; t < tasks; ++t) {
        const auto task = static_cast<std::size_t>(t);
        const std::size_t s = task / n_th;
        const std::size_t ti = task % n_th;
        const std::size_t th = thresholds[ti];
        try {
          const auto selection = select_top(result.outputs[s][fold].at(th), th);
          const auto model = gbm_train(train.select_columns(selection.features), options.gbm);
          const auto proba = predict_proba(model, test.select_columns(selection.features));
          result.metrics[(s * k + fold) * n_th + ti] = {specs[s].label, fold, th,
                                                        roc_auc(proba, test.labels()),
                                                        pr_auc(proba, test.labels())};
        } catch (const Error& e) {
          errors[task] = std::make_exception_ptr(
              Error(e.kind(), "fold " + std::to_string(fold) + ", strategy '" + specs[s].label +
                                  "', threshold " + std::to_string(th) + ": " + e.what()));
        } catch (...) {
          errors[task] = std::current_exception();
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    result.balanced_train.push_back(std::move(balanced));
  }

  result.stability.reserve(specs.size() * n_th);
  std::vector<SelectionSet> sets(k);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (auto th : thresholds) {
      for (std::size_t fold = 0; fold < k; ++fold) sets[fold] = select_top(result.outputs[s][fold].at(th), th);
      result.stability.push_back({specs[s].label, th, kuncheva_index(sets)});
    }
  }
  return result;
}

}  // namespace hybefs
