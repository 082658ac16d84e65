#pragma once

// Data-parallel inner loops used by the rankers.
//
// Each kernel has an OpenMP version in `hybefs::kernels` and a plain serial
// reference in `hybefs::kernels::serial`. Both accumulate every output
// element in the same order, so their results are bitwise identical; the
// tests assert this and bench/ compares their speed.

#include <cstddef>
#include <span>
#include <vector>

namespace hybefs::kernels {

/// Column-major block of `rows` x `cols` doubles.
struct ColumnBlock {
  std::span<const double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> column(std::size_t c) const { return values.subspan(c * rows, rows); }
};

/// z-scores every column with the population standard deviation. Constant
/// columns become all-zero.
std::vector<double> standardize_columns(const ColumnBlock& x);

/// Full rows x rows matrix of Manhattan distances where each feature term is
/// |a - b| / range[f] (skipped when range[f] == 0). Terms are summed in
/// ascending feature order for every pair.
std::vector<double> range_scaled_manhattan(const ColumnBlock& x, std::span<const double> range);

/// ReliefF weight update for every feature. `hits` and `misses` hold
/// `k` neighbour row ids per sample, nearest first.
std::vector<double> relieff_weights(const ColumnBlock& x, std::span<const double> range,
                                    std::span<const std::size_t> hits,
                                    std::span<const std::size_t> misses, std::size_t k);

/// Adds x[:, order[j]] * coef[order[j]] to out for j = 0..cols-1, in that
/// order, for every row.
void accumulate_linear(const ColumnBlock& x, std::span<const double> coef,
                       std::span<const std::size_t> order, std::span<double> out);

/// out[c] = sum_r x[r, c] * weights[r] / rows.
std::vector<double> column_means_weighted(const ColumnBlock& x, std::span<const double> weights);

namespace serial {

std::vector<double> standardize_columns(const ColumnBlock& x);
std::vector<double> range_scaled_manhattan(const ColumnBlock& x, std::span<const double> range);
std::vector<double> relieff_weights(const ColumnBlock& x, std::span<const double> range,
                                    std::span<const std::size_t> hits,
                                    std::span<const std::size_t> misses, std::size_t k);
void accumulate_linear(const ColumnBlock& x, std::span<const double> coef,
                       std::span<const std::size_t> order, std::span<double> out);
std::vector<double> column_means_weighted(const ColumnBlock& x, std::span<const double> weights);

}  // namespace serial

/// Threads used by parallel regions started from the calling thread.
void set_worker_count(int workers);
int worker_count();

}  // namespace hybefs::kernels
