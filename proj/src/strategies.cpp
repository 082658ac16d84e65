#include "hybefs/strategies.hpp"

#include <exception>
#include <set>

#include "hybefs/error.hpp"

namespace hybefs {

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::single: return "single";
    case StrategyKind::homogeneous: return "homogeneous";
    case StrategyKind::heterogeneous: return "heterogeneous";
    case StrategyKind::hybrid: return "hybrid";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view name) {
  for (auto k : {StrategyKind::single, StrategyKind::homogeneous, StrategyKind::heterogeneous,
                 StrategyKind::hybrid}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

void validate(const StrategySpec& spec, bool allow_degenerate) {
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::config, "strategy '" + spec.label + "': " + why);
  };
  if (spec.algorithms.empty()) bad("no algorithms given");
  if (std::set<Algorithm>(spec.algorithms.begin(), spec.algorithms.end()).size() !=
      spec.algorithms.size()) {
    bad("algorithm listed twice");
  }
  const std::size_t m = spec.algorithms.size();
  const std::size_t min_algorithms = allow_degenerate ? 1 : 2;
  const std::size_t min_bootstraps = allow_degenerate ? 1 : 2;
  const bool stb = spec.fam == FirstStage::Method::stability_weighted;
  if (stb && spec.kind != StrategyKind::hybrid) {
    bad("stability-weighted aggregation is only available to hybrid strategies");
  }
  switch (spec.kind) {
    case StrategyKind::single:
      if (m != 1) bad("single strategies take exactly one algorithm");
      if (spec.n_bootstraps != 0) bad("single strategies use no bootstraps");
      break;
    case StrategyKind::homogeneous:
      if (m != 1) bad("homogeneous strategies take exactly one algorithm");
      if (spec.n_bootstraps < min_bootstraps) bad("homogeneous strategies need at least 2 bootstraps");
      break;
    case StrategyKind::heterogeneous:
      if (m < min_algorithms) bad("heterogeneous strategies need at least 2 algorithms");
      if (spec.n_bootstraps != 0) bad("heterogeneous strategies use no bootstraps");
      break;
    case StrategyKind::hybrid:
      if (m < min_algorithms) bad("hybrid strategies need at least 2 algorithms");
      if (spec.n_bootstraps < min_bootstraps) bad("hybrid strategies need at least 2 bootstraps");
      if (stb && spec.n_bootstraps < 2) bad("stability weighting needs at least 2 bootstraps");
      break;
  }
}

std::vector<StrategySpec> builtin_roster(std::size_t n_bootstraps) {
  using enum Algorithm;
  std::vector<StrategySpec> roster;
  for (Algorithm a : kAllAlgorithms) {
    roster.push_back({StrategyKind::single, {a}, 0, FirstStage::Method::borda,
                      "Sin-" + std::string(display_name(a))});
  }
  for (Algorithm a : kAllAlgorithms) {
    roster.push_back({StrategyKind::homogeneous, {a}, n_bootstraps, FirstStage::Method::borda,
                      "Hom-" + std::string(display_name(a))});
  }
  const std::vector<Algorithm> all(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
  const std::vector<Algorithm> top3{wx, gr, su};
  roster.push_back({StrategyKind::heterogeneous, all, 0, FirstStage::Method::borda, "Het-EFS"});
  roster.push_back({StrategyKind::heterogeneous, top3, 0, FirstStage::Method::borda, "Het-Wx-GR-SU"});
  roster.push_back({StrategyKind::hybrid, all, n_bootstraps, FirstStage::Method::borda, "Hyb-EFS-Borda"});
  roster.push_back({StrategyKind::hybrid, all, n_bootstraps, FirstStage::Method::stability_weighted,
                    "Hyb-EFS-Stb"});
  roster.push_back({StrategyKind::hybrid, top3, n_bootstraps, FirstStage::Method::stability_weighted,
                    "Hyb-Wx-GR-SU"});
  return roster;
}

std::optional<StrategySpec> find_builtin(std::string_view label, std::size_t n_bootstraps) {
  for (auto& spec : builtin_roster(n_bootstraps)) {
    if (spec.label == label) return spec;
  }
  return std::nullopt;
}

const FeatureRanking& StrategyOutput::at(std::size_t th) const {
  if (ranking) return *ranking;
  const auto it = per_threshold.find(th);
  if (it == per_threshold.end()) {
    fail(ErrorKind::runtime, "no ranking aggregated for threshold " + std::to_string(th));
  }
  return it->second;
}

RankingCache::RankingCache(const ExpressionMatrix& train, std::uint64_t seed, std::uint64_t fold_tag,
                           RankerParams params, std::vector<std::size_t> origin, AuditHook audit)
    : train_(train), seed_(seed), fold_tag_(fold_tag), params_(params), origin_(std::move(origin)),
      audit_(std::move(audit)) {
  if (origin_.empty()) {
    origin_.resize(train_.n_samples());
    for (std::size_t i = 0; i < origin_.size(); ++i) origin_[i] = i;
  }
}

const SampleIndexSet& RankingCache::bag(std::size_t b) {
  auto it = bags_.find(b);
  if (it == bags_.end()) {
    SampleIndexSet all(train_.n_samples());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    it = bags_.emplace(b, bootstrap(all, train_.labels(), derive_stream(seed_, {fold_tag_, b}))).first;
  }
  return it->second;
}

void RankingCache::note_input(const Key& key) {
  if (!audit_) return;
  if (key.first == kFull) {
    audit_("ranker_input", origin_);
    return;
  }
  const auto& rows = bag(key.first);
  std::vector<std::size_t> mapped(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) mapped[i] = origin_[rows[i]];
  audit_("ranker_input", mapped);
}

FeatureRanking RankingCache::compute(const Key& key) const {
  try {
    if (key.first == kFull) return run_ranker(key.second, train_, params_);
    return run_ranker(key.second, train_.select_rows(bags_.at(key.first)), params_);
  } catch (const Error& e) {
    const std::string where = key.first == kFull ? std::string("full training set")
                                                 : "bootstrap " + std::to_string(key.first);
    fail(e.kind(), where + ", algorithm " + std::string(to_string(key.second)) + ": " + e.what());
  }
}

void RankingCache::prefetch(std::span<const StrategySpec> specs) {
  std::set<Key> wanted;
  for (const auto& spec : specs) {
    const bool bagged_kind =
        spec.kind == StrategyKind::homogeneous || spec.kind == StrategyKind::hybrid;
    for (Algorithm a : spec.algorithms) {
      if (bagged_kind) {
        for (std::size_t b = 0; b < spec.n_bootstraps; ++b) wanted.emplace(b, a);
      } else {
        wanted.emplace(kFull, a);
      }
    }
  }
  std::vector<Key> todo;
  for (const auto& key : wanted) {
    if (rankings_.count(key)) continue;
    if (key.first != kFull) bag(key.first);
    note_input(key);
    todo.push_back(key);
  }

  std::vector<FeatureRanking> results(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  const auto tasks = static_cast<std::ptrdiff_t>(todo.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    const auto i = static_cast<std::size_t>(t);
    try {
      results[i] = compute(todo[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < todo.size(); ++i) rankings_.emplace(todo[i], std::move(results[i]));
  calls_ += todo.size();
}

const FeatureRanking& RankingCache::bagged(std::size_t b, Algorithm a) {
  const Key key{b, a};
  auto it = rankings_.find(key);
  if (it == rankings_.end()) {
    bag(b);
    note_input(key);
    it = rankings_.emplace(key, compute(key)).first;
    ++calls_;
  }
  return it->second;
}

const FeatureRanking& RankingCache::full(Algorithm a) {
  const Key key{kFull, a};
  auto it = rankings_.find(key);
  if (it == rankings_.end()) {
    note_input(key);
    it = rankings_.emplace(key, compute(key)).first;
    ++calls_;
  }
  return it->second;
}

StrategyOutput run_strategy(RankingCache& cache, const StrategySpec& spec,
                            std::span<const std::size_t> thresholds, bool allow_degenerate) {
  validate(spec, allow_degenerate);
  const std::size_t nf = cache.train().n_features();
  for (auto th : thresholds) {
    if (th < 1 || th >= nf) {
      fail(ErrorKind::config, "threshold " + std::to_string(th) + " outside [1, " +
                                  std::to_string(nf) + ")");
    }
  }
  const StrategySpec one[] = {spec};
  cache.prefetch(one);

  StrategyOutput out;
  switch (spec.kind) {
    case StrategyKind::single:
      out.ranking = cache.full(spec.algorithms.front());
      break;
    case StrategyKind::heterogeneous: {
      std::vector<FeatureRanking> rankings;
      for (Algorithm a : spec.algorithms) rankings.push_back(cache.full(a));
      out.ranking = borda_aggregate(rankings);
      break;
    }
    case StrategyKind::homogeneous: {
      std::vector<FeatureRanking> rankings;
      for (std::size_t b = 0; b < spec.n_bootstraps; ++b) {
        rankings.push_back(cache.bagged(b, spec.algorithms.front()));
      }
      out.ranking = borda_aggregate(rankings);
      break;
    }
    case StrategyKind::hybrid: {
      RankingGrid grid;
      for (Algorithm a : spec.algorithms) grid.algorithm_names.emplace_back(to_string(a));
      grid.cells.resize(spec.n_bootstraps);
      for (std::size_t b = 0; b < spec.n_bootstraps; ++b) {
        for (Algorithm a : spec.algorithms) grid.cells[b].push_back(cache.bagged(b, a));
      }
      if (spec.fam == FirstStage::Method::borda) {
        out.ranking = two_stage_aggregate(grid, FirstStage::borda());
      } else {
        for (auto th : thresholds) {
          if (!out.per_threshold.count(th)) {
            out.per_threshold.emplace(th, two_stage_aggregate(grid, FirstStage::stability_weighted(th)));
          }
        }
      }
      break;
    }
  }
  return out;
}

StrategyOutput run_strategy(const ExpressionMatrix& train, const StrategySpec& spec,
                            std::span<const std::size_t> thresholds, std::uint64_t seed,
                            std::uint64_t fold_tag, const StrategyOptions& options) {
  RankingCache cache(train, seed, fold_tag, options.rankers);
  return run_strategy(cache, spec, thresholds, options.allow_degenerate);
}

}  // namespace hybefs
