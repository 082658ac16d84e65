// Serial reference vs OpenMP kernels on expression-sized blocks.
//
//   hybefs_bench --benchmark_filter=manhattan
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hybefs/kernels.hpp"
#include "hybefs/matrix.hpp"
#include "hybefs/rankers.hpp"

namespace k = hybefs::kernels;

namespace {

struct Fixture {
  std::vector<double> values;
  std::size_t rows;
  std::size_t cols;
  std::vector<double> range;
  k::ColumnBlock view() const { return {values, rows, cols}; }
};

const Fixture& fixture(std::size_t rows, std::size_t cols) {
  static std::vector<std::pair<std::pair<std::size_t, std::size_t>, Fixture>> cache;
  for (const auto& [key, f] : cache) {
    if (key == std::pair{rows, cols}) return f;
  }
  Fixture f{std::vector<double>(rows * cols), rows, cols, std::vector<double>(cols)};
  std::mt19937_64 rng(rows * 31 + cols);
  std::normal_distribution<double> z;
  for (auto& v : f.values) v = z(rng);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto col = f.view().column(c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    f.range[c] = *hi - *lo;
  }
  cache.emplace_back(std::pair{rows, cols}, std::move(f));
  return cache.back().second;
}

template <bool Parallel>
void BM_standardize(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto out = Parallel ? k::standardize_columns(f.view()) : k::serial::standardize_columns(f.view());
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_manhattan(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto out = Parallel ? k::range_scaled_manhattan(f.view(), f.range)
                        : k::serial::range_scaled_manhattan(f.view(), f.range);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_relieff_weights(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  constexpr std::size_t kk = 10;
  std::vector<std::size_t> hits(f.rows * kk);
  std::vector<std::size_t> misses(f.rows * kk);
  std::mt19937_64 rng(1);
  for (auto& h : hits) h = rng() % f.rows;
  for (auto& m : misses) m = rng() % f.rows;
  for (auto _ : state) {
    auto out = Parallel ? k::relieff_weights(f.view(), f.range, hits, misses, kk)
                        : k::serial::relieff_weights(f.view(), f.range, hits, misses, kk);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_accumulate_linear(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::vector<double> coef(f.cols, 0.5);
  std::vector<std::size_t> order(f.cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> out(f.rows);
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0);
    if (Parallel) {
      k::accumulate_linear(f.view(), coef, order, out);
    } else {
      k::serial::accumulate_linear(f.view(), coef, order, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_column_means_weighted(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::vector<double> w(f.rows, 0.25);
  for (auto _ : state) {
    auto out = Parallel ? k::column_means_weighted(f.view(), w) : k::serial::column_means_weighted(f.view(), w);
    benchmark::DoNotOptimize(out.data());
  }
}

// Whole ranker, as used inside one bootstrap bag.
void BM_ranker(benchmark::State& state) {
  const auto algorithm = hybefs::kAllAlgorithms[state.range(0)];
  static const auto data = hybefs::generate_synthetic({160, 2000, 20, 1.0, 0.5, 3}).matrix;
  state.SetLabel(std::string(hybefs::display_name(algorithm)));
  for (auto _ : state) {
    auto r = hybefs::run_ranker(algorithm, data);
    benchmark::DoNotOptimize(r.order.data());
  }
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({140, 2000})->Args({140, 20000})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_standardize<false>)->Apply(shapes);
BENCHMARK(BM_standardize<true>)->Apply(shapes);
BENCHMARK(BM_manhattan<false>)->Apply(shapes);
BENCHMARK(BM_manhattan<true>)->Apply(shapes);
BENCHMARK(BM_relieff_weights<false>)->Apply(shapes);
BENCHMARK(BM_relieff_weights<true>)->Apply(shapes);
BENCHMARK(BM_accumulate_linear<false>)->Apply(shapes);
BENCHMARK(BM_accumulate_linear<true>)->Apply(shapes);
BENCHMARK(BM_column_means_weighted<false>)->Apply(shapes);
BENCHMARK(BM_column_means_weighted<true>)->Apply(shapes);
BENCHMARK(BM_ranker)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
