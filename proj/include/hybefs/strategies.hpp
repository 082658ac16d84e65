#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybefs/aggregation.hpp"
#include "hybefs/matrix.hpp"
#include "hybefs/rankers.hpp"
#include "hybefs/resampling.hpp"

namespace hybefs {

enum class StrategyKind { single, homogeneous, heterogeneous, hybrid };

std::string_view to_string(StrategyKind k);
std::optional<StrategyKind> parse_strategy_kind(std::string_view name);

struct StrategySpec {
  StrategyKind kind = StrategyKind::single;
  std::vector<Algorithm> algorithms;
  std::size_t n_bootstraps = 0;
  FirstStage::Method fam = FirstStage::Method::borda;
  std::string label;

  bool threshold_dependent() const noexcept {
    return kind == StrategyKind::hybrid && fam == FirstStage::Method::stability_weighted;
  }
};

/// Throws a config error naming the broken rule. `allow_degenerate` admits
/// one-algorithm heterogeneous/hybrid specs and one-bootstrap
/// homogeneous/hybrid specs, which are only useful as test fixtures.
void validate(const StrategySpec& spec, bool allow_degenerate = false);

/// The fifteen named strategies compared in the experiments.
std::vector<StrategySpec> builtin_roster(std::size_t n_bootstraps = 50);
std::optional<StrategySpec> find_builtin(std::string_view label, std::size_t n_bootstraps = 50);

/// A single final ranking, or one per threshold for stability-weighted hybrids.
struct StrategyOutput {
  std::optional<FeatureRanking> ranking;
  std::map<std::size_t, FeatureRanking> per_threshold;

  const FeatureRanking& at(std::size_t th) const;
};

/// Called with original dataset row ids whenever rows are handed to a
/// ranker. Always invoked from the calling thread.
using AuditHook = std::function<void(std::string_view stage, std::span<const std::size_t> rows)>;

/// Memoises rankings of one training matrix, on the full matrix and on
/// bootstrap bags. Bag b is drawn with seed derive_stream(seed, {fold_tag, b}),
/// so every strategy sees the same bags and shares their rankings.
class RankingCache {
 public:
  RankingCache(const ExpressionMatrix& train, std::uint64_t seed, std::uint64_t fold_tag,
               RankerParams params = {}, std::vector<std::size_t> origin = {},
               AuditHook audit = {});

  const ExpressionMatrix& train() const noexcept { return train_; }

  /// Computes every ranking the given strategies will request, in parallel.
  void prefetch(std::span<const StrategySpec> specs);

  const SampleIndexSet& bag(std::size_t b);
  const FeatureRanking& full(Algorithm a);
  const FeatureRanking& bagged(std::size_t b, Algorithm a);

  std::size_t ranker_calls() const noexcept { return calls_; }

 private:
  // bootstrap == kFull marks a ranking of the whole training matrix.
  static constexpr std::size_t kFull = static_cast<std::size_t>(-1);
  using Key = std::pair<std::size_t, Algorithm>;

  FeatureRanking compute(const Key& key) const;
  void note_input(const Key& key);

  const ExpressionMatrix& train_;
  std::uint64_t seed_;
  std::uint64_t fold_tag_;
  RankerParams params_;
  std::vector<std::size_t> origin_;
  AuditHook audit_;
  std::map<std::size_t, SampleIndexSet> bags_;
  std::map<Key, FeatureRanking> rankings_;
  std::size_t calls_ = 0;
};

struct StrategyOptions {
  RankerParams rankers;
  bool allow_degenerate = false;
};

StrategyOutput run_strategy(RankingCache& cache, const StrategySpec& spec,
                            std::span<const std::size_t> thresholds, bool allow_degenerate = false);

StrategyOutput run_strategy(const ExpressionMatrix& train, const StrategySpec& spec,
                            std::span<const std::size_t> thresholds, std::uint64_t seed,
                            std::uint64_t fold_tag = 0, const StrategyOptions& options = {});

}  // namespace hybefs
