#include "hybefs/kernels.hpp"

#include <algorithm>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hybefs::kernels {

namespace {

// Per-column body shared by both standardize variants.
void standardize_one(std::span<const double> col, double* out) {
  const std::size_t n = col.size();
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  if (n == 0 || *lo == *hi) {
    std::fill_n(out, n, 0.0);
    return;
  }
  double mean = 0.0;
  for (double v : col) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : col) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));
  for (std::size_t r = 0; r < n; ++r) out[r] = (col[r] - mean) / sd;
}

void manhattan_row(const ColumnBlock& x, std::span<const double> range, std::size_t i,
                   double* row) {
  const std::size_t n = x.rows;
  std::fill_n(row, n, 0.0);
  for (std::size_t f = 0; f < x.cols; ++f) {
    if (range[f] == 0.0) continue;
    const double* col = x.values.data() + f * n;
    const double a = col[i];
    const double r = range[f];
    for (std::size_t j = 0; j < n; ++j) row[j] += std::abs(a - col[j]) / r;
  }
}

double relieff_one(std::span<const double> col, double range, std::span<const std::size_t> hits,
                   std::span<const std::size_t> misses, std::size_t k) {
  if (range == 0.0) return 0.0;
  const std::size_t n = col.size();
  const double denom = static_cast<double>(n) * static_cast<double>(k);
  double w = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double miss_sum = 0.0;
    double hit_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      miss_sum += std::abs(col[s] - col[misses[s * k + j]]) / range;
      hit_sum += std::abs(col[s] - col[hits[s * k + j]]) / range;
    }
    w += (miss_sum - hit_sum) / denom;
  }
  return w;
}

double weighted_mean(std::span<const double> col, std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t r = 0; r < col.size(); ++r) acc += col[r] * weights[r];
  return acc / static_cast<double>(col.size());
}

}  // namespace

std::vector<double> standardize_columns(const ColumnBlock& x) {
  std::vector<double> out(x.values.size());
  const auto cols = static_cast<std::ptrdiff_t>(x.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    standardize_one(x.column(cu), out.data() + cu * x.rows);
  }
  return out;
}

std::vector<double> range_scaled_manhattan(const ColumnBlock& x, std::span<const double> range) {
  const std::size_t n = x.rows;
  std::vector<double> dist(n * n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    manhattan_row(x, range, iu, dist.data() + iu * n);
  }
  return dist;
}

std::vector<double> relieff_weights(const ColumnBlock& x, std::span<const double> range,
                                    std::span<const std::size_t> hits,
                                    std::span<const std::size_t> misses, std::size_t k) {
  std::vector<double> w(x.cols);
  const auto cols = static_cast<std::ptrdiff_t>(x.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    w[cu] = relieff_one(x.column(cu), range[cu], hits, misses, k);
  }
  return w;
}

void accumulate_linear(const ColumnBlock& x, std::span<const double> coef,
                       std::span<const std::size_t> order, std::span<double> out) {
  const std::size_t n = x.rows;
#pragma omp parallel
  {
#if defined(_OPENMP)
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#else
    const std::size_t threads = 1;
    const std::size_t tid = 0;
#endif
    const std::size_t chunk = (n + threads - 1) / threads;
    const std::size_t begin = std::min(n, tid * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    for (std::size_t c : order) {
      const double w = coef[c];
      if (w == 0.0) continue;
      const double* col = x.values.data() + c * n;
      for (std::size_t r = begin; r < end; ++r) out[r] += col[r] * w;
    }
  }
}

std::vector<double> column_means_weighted(const ColumnBlock& x, std::span<const double> weights) {
  std::vector<double> out(x.cols);
  const auto cols = static_cast<std::ptrdiff_t>(x.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    out[cu] = weighted_mean(x.column(cu), weights);
  }
  return out;
}

namespace serial {

std::vector<double> standardize_columns(const ColumnBlock& x) {
  std::vector<double> out(x.values.size());
  for (std::size_t c = 0; c < x.cols; ++c) standardize_one(x.column(c), out.data() + c * x.rows);
  return out;
}

std::vector<double> range_scaled_manhattan(const ColumnBlock& x, std::span<const double> range) {
  const std::size_t n = x.rows;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) manhattan_row(x, range, i, dist.data() + i * n);
  return dist;
}

std::vector<double> relieff_weights(const ColumnBlock& x, std::span<const double> range,
                                    std::span<const std::size_t> hits,
                                    std::span<const std::size_t> misses, std::size_t k) {
  std::vector<double> w(x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) w[c] = relieff_one(x.column(c), range[c], hits, misses, k);
  return w;
}

void accumulate_linear(const ColumnBlock& x, std::span<const double> coef,
                       std::span<const std::size_t> order, std::span<double> out) {
  for (std::size_t c : order) {
    const double w = coef[c];
    if (w == 0.0) continue;
    const double* col = x.values.data() + c * x.rows;
    for (std::size_t r = 0; r < x.rows; ++r) out[r] += col[r] * w;
  }
}

std::vector<double> column_means_weighted(const ColumnBlock& x, std::span<const double> weights) {
  std::vector<double> out(x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) out[c] = weighted_mean(x.column(c), weights);
  return out;
}

}  // namespace serial

void set_worker_count(int workers) {
#if defined(_OPENMP)
  omp_set_num_threads(std::max(1, workers));
#else
  (void)workers;
#endif
}

int worker_count() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hybefs::kernels
