#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>

#include "hybefs/kernels.hpp"
#include "hybefs/rankers.hpp"
#include "oracles.hpp"

using namespace hybefs;
namespace k = hybefs::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Block {
  std::vector<double> values;
  std::size_t rows;
  std::size_t cols;
  k::ColumnBlock view() const { return {values, rows, cols}; }
};

Block random_block(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Block b{std::vector<double>(rows * cols), rows, cols};
  for (auto& v : b.values) v = z(rng) * 3.0 + 1.0;
  // one constant column
  std::fill_n(b.values.begin() + static_cast<long>(rows), rows, 2.5);
  return b;
}

std::vector<double> ranges(const Block& b) {
  std::vector<double> r(b.cols);
  for (std::size_t c = 0; c < b.cols; ++c) {
    const auto col = b.view().column(c);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    r[c] = *hi - *lo;
  }
  return r;
}

}  // namespace

TEST_CASE("parallel kernels are bitwise identical to the serial references") {
  for (int workers : {1, 2, 3, 8}) {
    CAPTURE(workers);
    k::set_worker_count(workers);
    const auto b = random_block(37, 23, 100 + static_cast<std::uint64_t>(workers));
    const auto x = b.view();
    const auto range = ranges(b);

    CHECK(same_bits(k::standardize_columns(x), k::serial::standardize_columns(x)));
    const auto dist = k::range_scaled_manhattan(x, range);
    CHECK(same_bits(dist, k::serial::range_scaled_manhattan(x, range)));

    const std::size_t kk = 3;
    std::vector<std::size_t> hits(b.rows * kk);
    std::vector<std::size_t> misses(b.rows * kk);
    std::mt19937_64 rng(5);
    for (auto& h : hits) h = rng() % b.rows;
    for (auto& m : misses) m = rng() % b.rows;
    CHECK(same_bits(k::relieff_weights(x, range, hits, misses, kk),
                    k::serial::relieff_weights(x, range, hits, misses, kk)));

    std::vector<double> coef(b.cols);
    std::normal_distribution<double> z;
    for (auto& c : coef) c = z(rng);
    coef[4] = 0.0;
    std::vector<std::size_t> order(b.cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> out_par(b.rows, 0.25);
    std::vector<double> out_ser(b.rows, 0.25);
    k::accumulate_linear(x, coef, order, out_par);
    k::serial::accumulate_linear(x, coef, order, out_ser);
    CHECK(same_bits(out_par, out_ser));

    std::vector<double> w(b.rows);
    for (auto& v : w) v = z(rng);
    CHECK(same_bits(k::column_means_weighted(x, w), k::serial::column_means_weighted(x, w)));
  }
  k::set_worker_count(1);
}

TEST_CASE("standardize_columns: zero mean, unit population variance, constants to zero") {
  const auto b = random_block(50, 4, 9);
  const auto z = k::serial::standardize_columns(b.view());
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0;
    double sq = 0.0;
    for (std::size_t r = 0; r < 50; ++r) mean += z[c * 50 + r];
    mean /= 50.0;
    for (std::size_t r = 0; r < 50; ++r) sq += (z[c * 50 + r] - mean) * (z[c * 50 + r] - mean);
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    if (c == 1) {
      CHECK(sq == 0.0);
    } else {
      CHECK(sq / 50.0 == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("range_scaled_manhattan is symmetric with a zero diagonal") {
  const auto b = random_block(12, 5, 3);
  const auto range = ranges(b);
  const auto d = k::range_scaled_manhattan(b.view(), range);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(d[i * 12 + i] == 0.0);
    for (std::size_t j = 0; j < 12; ++j) CHECK(d[i * 12 + j] == d[j * 12 + i]);
  }
  // hand value for one pair
  double expect = 0.0;
  for (std::size_t c = 0; c < 5; ++c) {
    if (range[c] != 0.0) expect += std::abs(b.values[c * 12 + 2] - b.values[c * 12 + 7]) / range[c];
  }
  CHECK(d[2 * 12 + 7] == expect);
}

TEST_CASE("rankers give identical output for any worker count") {
  SyntheticSpec spec{60, 40, 5, 1.5, 0.5, 77};
  const auto m = generate_synthetic(spec).matrix;
  k::set_worker_count(1);
  std::vector<std::vector<double>> reference;
  for (auto a : kAllAlgorithms) reference.push_back(run_ranker(a, m).scores);
  for (int workers : {2, 4, 7}) {
    k::set_worker_count(workers);
    std::size_t i = 0;
    for (auto a : kAllAlgorithms) {
      CAPTURE(to_string(a));
      CHECK(same_bits(run_ranker(a, m).scores, reference[i++]));
    }
  }
  k::set_worker_count(1);
  CHECK(k::worker_count() == 1);
}
