#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "hybefs/aggregation.hpp"
#include "hybefs/error.hpp"
#include "hybefs/stability.hpp"
#include "oracles.hpp"

using namespace hybefs;

namespace {

// A ranking whose order is exactly `order` (scores descend along it).
FeatureRanking ranking_of(const std::vector<std::size_t>& order) {
  std::vector<double> scores(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    scores[order[r]] = static_cast<double>(order.size() - r);
  }
  auto out = FeatureRanking::from_scores(std::move(scores));
  REQUIRE(out.order == order);
  return out;
}

std::vector<std::size_t> random_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), std::size_t{0});
  std::shuffle(o.begin(), o.end(), rng);
  return o;
}

std::set<std::size_t> top_set(const std::vector<std::size_t>& order, std::size_t th) {
  return {order.begin(), order.begin() + static_cast<long>(th)};
}

}  // namespace

// --- stability ------------------------------------------------------------

TEST_CASE("consistency_index hand cases") {
  const auto a = make_selection({1, 2, 3, 4, 5}, 100);
  CHECK(consistency_index(a, a) == doctest::Approx(1.0));
  CHECK(consistency_index(make_selection({0, 1}, 10), make_selection({2, 3}, 10)) ==
        doctest::Approx(-0.25));
  const auto x = make_selection({0, 1, 2, 3, 4}, 20);
  const auto y = make_selection({0, 1, 2, 10, 11}, 20);
  CHECK(consistency_index(x, y) == doctest::Approx(35.0 / 75.0).epsilon(1e-12));
}

TEST_CASE("consistency_index errors") {
  CHECK_THROWS_AS(consistency_index(make_selection({}, 10), make_selection({}, 10)), Error);
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), std::size_t{0});
  CHECK_THROWS_AS(consistency_index(make_selection(all, 10), make_selection(all, 10)), Error);
  CHECK_THROWS_AS(consistency_index(make_selection({1}, 10), make_selection({1, 2}, 10)), Error);
  CHECK_THROWS_AS(make_selection({1, 1}, 10), Error);
  CHECK_THROWS_AS(make_selection({10}, 10), Error);
}

TEST_CASE("kuncheva_index hand cases") {
  const std::vector<SelectionSet> same(4, make_selection({3, 7}, 12));
  CHECK(kuncheva_index(same) == doctest::Approx(1.0));
  const std::vector<SelectionSet> three = {make_selection({1, 2}, 10), make_selection({1, 3}, 10),
                                           make_selection({4, 5}, 10)};
  CHECK(kuncheva_index(three) == doctest::Approx(-0.125 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(kuncheva_index(std::span<const SelectionSet>(three.data(), 1)), Error);
}

TEST_CASE("kuncheva_index matches the brute-force double loop") {
  std::mt19937_64 rng(31);
  constexpr std::size_t n = 60;
  for (std::size_t k : {1, 5, 17, 59}) {
    std::vector<SelectionSet> sets;
    std::vector<std::set<std::size_t>> plain;
    for (int i = 0; i < 100; ++i) {
      auto o = random_order(n, rng);
      o.resize(k);
      plain.emplace_back(o.begin(), o.end());
      sets.push_back(make_selection(o, n));
    }
    CHECK(kuncheva_index(sets) == doctest::Approx(oracle::kuncheva(plain, n)).epsilon(1e-12));
  }
}

TEST_CASE("select_top boundaries") {
  std::mt19937_64 rng(2);
  const auto order = random_order(30, rng);
  const auto r = ranking_of(order);
  CHECK(select_top(r, 1).features == std::vector<std::size_t>{order[0]});
  auto all_but_last = std::vector<std::size_t>(order.begin(), order.end() - 1);
  std::sort(all_but_last.begin(), all_but_last.end());
  CHECK(select_top(r, 29).features == all_but_last);
  CHECK_THROWS_AS(select_top(r, 0), Error);
  CHECK_THROWS_AS(select_top(r, 30), Error);

  std::vector<double> scores(20545);
  for (std::size_t f = 0; f < scores.size(); ++f) scores[f] = std::sin(static_cast<double>(f));
  const auto big = FeatureRanking::from_scores(std::move(scores));
  const auto top = select_top(big, 50);
  CHECK(top.k() == 50);
  CHECK(top.n == 20545);
}

// --- Borda ----------------------------------------------------------------

TEST_CASE("borda hand cases") {
  SUBCASE("single ranking is the identity") {
    const auto r = ranking_of({2, 0, 3, 1});
    CHECK(borda_aggregate(std::span(&r, 1)).order == r.order);
  }
  SUBCASE("reversed pair ties everywhere") {
    const std::vector<FeatureRanking> rs = {ranking_of({0, 1, 2}), ranking_of({2, 1, 0})};
    const auto out = borda_aggregate(rs);
    CHECK(out.scores == std::vector<double>{2, 2, 2});
    CHECK(out.order == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("A first twice") {
    const std::vector<FeatureRanking> rs = {ranking_of({0, 1, 2}), ranking_of({0, 2, 1})};
    const auto out = borda_aggregate(rs);
    CHECK(out.scores == std::vector<double>{4, 1, 1});
    CHECK(out.order == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("borda matches the integer point oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nf = 5 + static_cast<std::size_t>(trial) * 3;
    std::vector<std::vector<std::size_t>> orders;
    std::vector<FeatureRanking> rs;
    for (int j = 0; j < 7; ++j) {
      orders.push_back(random_order(nf, rng));
      rs.push_back(ranking_of(orders.back()));
    }
    const auto points = oracle::borda_points(orders);
    const auto out = borda_aggregate(rs);
    for (std::size_t f = 0; f < nf; ++f) CHECK(out.scores[f] == static_cast<double>(points[f]));
    CHECK(out.order == oracle::argsort_desc(points));
  }
}

TEST_CASE("borda is invariant to input order") {
  std::mt19937_64 rng(4);
  std::vector<FeatureRanking> rs;
  for (int j = 0; j < 6; ++j) rs.push_back(ranking_of(random_order(40, rng)));
  const auto a = borda_aggregate(rs);
  std::reverse(rs.begin(), rs.end());
  CHECK(borda_aggregate(rs).order == a.order);
}

TEST_CASE("weighted borda hand table") {
  const std::vector<FeatureRanking> rs = {ranking_of({0, 1, 2, 3}), ranking_of({3, 2, 1, 0})};
  const std::vector<double> w = {2.0, 0.5};
  // points: first ranking 3,2,1,0 ; second 0,1,2,3
  const auto out = weighted_borda_aggregate(rs, w);
  CHECK(out.scores == std::vector<double>{6.0, 4.5, 3.0, 1.5});
  CHECK(out.order == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(weighted_borda_aggregate(rs, std::vector<double>{1.0}), Error);
}

// --- stability weights and two-stage ---------------------------------------

TEST_CASE("kuncheva_weights: perfect, zero and brute-force stability") {
  std::mt19937_64 rng(12);
  constexpr std::size_t nf = 10;
  const auto fixed = random_order(nf, rng);
  RankingGrid grid;
  // Algorithm 0 is identical across bootstraps. Algorithm 1 has top-2 sets
  // {0,1}, {2,3}, {4,5}: pairwise KI is -0.25 each. Algorithm 2 is random.
  std::vector<std::vector<std::size_t>> alg1 = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
                                                {2, 3, 0, 1, 4, 5, 6, 7, 8, 9},
                                                {4, 5, 0, 1, 2, 3, 6, 7, 8, 9}};
  std::vector<std::vector<std::size_t>> alg2;
  for (int b = 0; b < 3; ++b) {
    alg2.push_back(random_order(nf, rng));
    grid.cells.push_back({ranking_of(fixed), ranking_of(alg1[b]), ranking_of(alg2.back())});
  }
  const auto w = kuncheva_weights(grid, 2);
  CHECK(w[0] == doctest::Approx(32.0));
  CHECK(w[1] == doctest::Approx(std::pow(0.75, 5)));
  std::vector<std::set<std::size_t>> sets;
  for (const auto& o : alg2) sets.push_back(top_set(o, 3));
  const double ki = oracle::kuncheva(sets, nf);
  CHECK(kuncheva_weights(grid, 3)[2] == doctest::Approx(std::pow(ki + 1.0, 5)).epsilon(1e-12));
  CHECK(stability_weight(0.0) == 1.0);
  CHECK(stability_weight(-1.0) == 0.0);
  CHECK_THROWS_AS(kuncheva_weights(grid, 0), Error);
  CHECK_THROWS_AS(kuncheva_weights(grid, nf), Error);
}

TEST_CASE("stability_weighted_fam: equal weights reduce to borda") {
  std::mt19937_64 rng(5);
  const auto fixed_a = random_order(12, rng);
  const auto fixed_b = random_order(12, rng);
  RankingGrid grid;
  for (int b = 0; b < 4; ++b) grid.cells.push_back({ranking_of(fixed_a), ranking_of(fixed_b)});
  const auto fam = stability_weighted_fam(grid, 4);
  for (std::size_t b = 0; b < 4; ++b) CHECK(fam[b].order == borda_aggregate(grid.cells[b]).order);
}

TEST_CASE("stability_weighted_fam: an algorithm with KI = -1 has no influence") {
  // n = 2 features-per-set with two bootstraps: top-5 of 10 disjoint gives
  // I_C = (0 - 25) / 25 = -1.
  std::mt19937_64 rng(9);
  const auto stable = random_order(10, rng);
  const std::vector<std::size_t> u1 = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<std::size_t> u2 = {5, 6, 7, 8, 9, 0, 1, 2, 3, 4};
  RankingGrid grid;
  grid.cells = {{ranking_of(stable), ranking_of(u1)}, {ranking_of(stable), ranking_of(u2)}};
  const auto w = kuncheva_weights(grid, 5);
  CHECK(w[1] == 0.0);
  const auto fam = stability_weighted_fam(grid, 5);
  CHECK(fam[0].order == stable);
  CHECK(fam[1].order == stable);
}

TEST_CASE("stability_weighted_fam: m = 2, n = 2 hand table") {
  // Alg 0: top-1 {0} then {0}: KI = 1, weight 32.
  // Alg 1: top-1 {1} then {2}: I_C = (0 - 1) / (1 * 3) = -1/3, weight (2/3)^5.
  RankingGrid grid;
  grid.cells = {{ranking_of({0, 1, 2, 3}), ranking_of({1, 3, 2, 0})},
                {ranking_of({0, 2, 1, 3}), ranking_of({2, 3, 1, 0})}};
  const double w1 = std::pow(2.0 / 3.0, 5);
  const auto fam = stability_weighted_fam(grid, 1);
  // bootstrap 0 points: alg0 {3,2,1,0}, alg1 {0,3,1,2}
  const std::vector<double> s0 = {32 * 3.0 + w1 * 0, 32 * 2.0 + w1 * 3, 32 * 1.0 + w1 * 1, 32 * 0.0 + w1 * 2};
  for (std::size_t f = 0; f < 4; ++f) CHECK(fam[0].scores[f] == doctest::Approx(s0[f]).epsilon(1e-12));
  CHECK(fam[0].order == oracle::argsort_desc(s0));
  // bootstrap 1 points: alg0 {3,1,2,0}, alg1 {0,1,3,2}
  const std::vector<double> s1 = {32 * 3.0, 32 * 1.0 + w1 * 1, 32 * 2.0 + w1 * 3, w1 * 2};
  CHECK(fam[1].order == oracle::argsort_desc(s1));
}

TEST_CASE("two_stage_aggregate identities and hand grid") {
  SUBCASE("n = 1, m = 1") {
    RankingGrid grid;
    grid.cells = {{ranking_of({3, 1, 0, 2})}};
    CHECK(two_stage_aggregate(grid, FirstStage::borda()).order ==
          std::vector<std::size_t>{3, 1, 0, 2});
  }
  SUBCASE("identical rows make FAM a no-op") {
    std::mt19937_64 rng(1);
    RankingGrid grid;
    std::vector<FeatureRanking> per_boot;
    for (int b = 0; b < 5; ++b) {
      const auto o = random_order(15, rng);
      grid.cells.push_back({ranking_of(o), ranking_of(o), ranking_of(o)});
      per_boot.push_back(ranking_of(o));
    }
    CHECK(two_stage_aggregate(grid, FirstStage::borda()).order == borda_aggregate(per_boot).order);
  }
  SUBCASE("n = 2, m = 2 enumerated") {
    RankingGrid grid;
    grid.cells = {{ranking_of({0, 1, 2}), ranking_of({1, 2, 0})},
                  {ranking_of({2, 0, 1}), ranking_of({2, 1, 0})}};
    // FAM: bootstrap 0 points {2,1,0}+{0,2,1} = {2,3,1} -> order 1,0,2
    //      bootstrap 1 points {1,0,2}+{0,1,2} = {1,1,4} -> order 2,0,1
    // SAM: {1,2,0}+{1,0,2} = {2,2,2} -> order 0,1,2
    const auto out = two_stage_aggregate(grid, FirstStage::borda());
    CHECK(out.scores == std::vector<double>{2, 2, 2});
    CHECK(out.order == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("ragged grid rejected") {
    RankingGrid grid;
    grid.cells = {{ranking_of({0, 1})}, {ranking_of({0, 1}), ranking_of({1, 0})}};
    CHECK_THROWS_AS(two_stage_aggregate(grid, FirstStage::borda()), Error);
  }
}
