#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "hybefs/csv.hpp"
#include "hybefs/error.hpp"
#include "hybefs/matrix.hpp"
#include "oracles.hpp"

using namespace hybefs;

namespace {

std::string error_of(const std::string& text, const CsvOptions& options = {}) {
  try {
    parse_csv(text, options);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::data);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("load_csv: minimal two-row file") {
  const auto m = parse_csv("g1,class\n0.5,0\n1.5,1\n");
  CHECK(m.n_samples() == 2);
  CHECK(m.n_features() == 1);
  CHECK(m.at(0, 0) == 0.5);
  CHECK(m.at(1, 0) == 1.5);
  CHECK(m.labels()[1] == 1);
}

TEST_CASE("load_csv: column order preserved, label and id columns dropped") {
  const auto m = parse_csv("sample_id,b,class,a\ns1,1,0,2\ns2,3,1,4\n");
  REQUIRE(m.n_features() == 2);
  CHECK(m.feature_names()[0] == "b");
  CHECK(m.feature_names()[1] == "a");
  CHECK(m.at(1, 1) == 4.0);
}

TEST_CASE("load_csv: custom label column, quoted names, CRLF") {
  CsvOptions opts;
  opts.label_column = "tumor";
  const auto m = parse_csv("\"gene,1\",tumor\r\n7,1\r\n-2e3,0\r\n", opts);
  CHECK(m.feature_names()[0] == "gene,1");
  CHECK(m.at(1, 0) == -2000.0);
}

TEST_CASE("load_csv: errors carry coordinates") {
  CHECK(error_of("a,b\n1,2\n").find("missing label column") != std::string::npos);
  const auto non_binary = error_of("a,class\n1,0\n2,1\n3,2\n");
  CHECK(non_binary.find("non-binary label") != std::string::npos);
  CHECK(non_binary.find("line 4") != std::string::npos);
  const auto non_numeric = error_of("a,b,class\n1,2,0\n1,x,1\n");
  CHECK(non_numeric.find("non-numeric") != std::string::npos);
  CHECK(non_numeric.find("line 3, column 2") != std::string::npos);
  CHECK(error_of("a,a,class\n1,2,0\n1,2,1\n").find("duplicate feature name") != std::string::npos);
  CHECK(error_of("a,class\n1,1\n2,1\n").find("single-class") != std::string::npos);
  CHECK(error_of("a,class\nnan,1\n2,0\n").find("non-numeric") != std::string::npos);
  CHECK(error_of("a,class\n1,1,3\n2,0\n").find("fields") != std::string::npos);
}

TEST_CASE("load_csv: pancreas-shaped file") {
  // 178 samples x 22881 features, 108 tumour / 70 normal.
  constexpr std::size_t rows = 178;
  constexpr std::size_t cols = 22881;
  std::string text;
  text.reserve(rows * cols * 2 + cols * 7);
  for (std::size_t f = 0; f < cols; ++f) text += "p" + std::to_string(f) + ",";
  text += "class\n";
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t f = 0; f < cols; ++f) {
      text += static_cast<char>('0' + (s + f) % 10);
      text += ',';
    }
    text += s < 108 ? "1\n" : "0\n";
  }
  const auto m = parse_csv(text);
  CHECK(m.n_samples() == rows);
  CHECK(m.n_features() == cols);
  CHECK(m.count_label(1) == 108);
  CHECK(m.count_label(0) == 70);
}

TEST_CASE("csv writer round-trips every bit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> values(40 * 7);
  for (auto& v : values) v = u(rng) * std::pow(10.0, static_cast<double>(rng() % 40) - 20.0);
  values[3] = 0.1;
  values[4] = -0.0;
  values[5] = 5e-324;
  std::vector<std::string> names;
  for (int f = 0; f < 7; ++f) names.push_back("gene \"" + std::to_string(f) + "\", x");
  std::vector<Label> labels(40);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 3 == 0;
  const ExpressionMatrix original(40, values, names, labels);
  const auto back = parse_csv(to_csv(original));
  REQUIRE(back.n_features() == 7);
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(std::signbit(back.raw()[i]) == std::signbit(values[i]));
    CHECK(back.raw()[i] == values[i]);
  }
  CHECK(back.feature_names()[2] == names[2]);
  CHECK(std::equal(back.labels().begin(), back.labels().end(), labels.begin()));
}

TEST_CASE("csv helpers quote only when needed") {
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const auto fields = csv::split_record("\"a,b\",c,\"d\"\"e\"");
  REQUIRE(fields.size() == 3);
  CHECK(fields[0] == "a,b");
  CHECK(fields[2] == "d\"e");
}

TEST_CASE("matrix rejects invalid construction") {
  CHECK_THROWS_AS(ExpressionMatrix(2, {1.0, NAN}, {"a"}, {0, 1}), Error);
  CHECK_THROWS_AS(ExpressionMatrix(2, {1, 2, 3, 4}, {"a", "a"}, {0, 1}), Error);
  CHECK_THROWS_AS(ExpressionMatrix(2, {1, 2}, {"a"}, {0, 2}), Error);
  CHECK_THROWS_AS(ExpressionMatrix(2, {1, 2, 3}, {"a"}, {0, 1}), Error);
}

TEST_CASE("select_rows keeps duplicates and labels") {
  const ExpressionMatrix m(3, {1, 2, 3, 10, 20, 30}, {"a", "b"}, {0, 1, 1});
  const std::size_t rows[] = {2, 2, 0};
  const auto sub = m.select_rows(rows);
  CHECK(sub.n_samples() == 3);
  CHECK(sub.at(0, 1) == 30);
  CHECK(sub.at(2, 0) == 1);
  CHECK(sub.labels()[2] == 0);
  const std::size_t cols[] = {1};
  const auto narrow = m.select_columns(cols);
  CHECK(narrow.feature_names()[0] == "b");
  CHECK(narrow.at(1, 0) == 20);
}

TEST_CASE("generate_synthetic: zero effect leaves class means indistinguishable") {
  SyntheticSpec spec;
  spec.n_samples = 200;
  spec.n_features = 20;
  spec.n_informative = 5;
  spec.effect_size = 0.0;
  spec.seed = 3;
  const auto data = generate_synthetic(spec);
  const double bound = 5.0 / std::sqrt(static_cast<double>(spec.n_samples));
  for (std::size_t f = 0; f < spec.n_features; ++f) {
    CHECK(std::abs(oracle::class_mean_difference(data.matrix, f)) < bound);
  }
}

TEST_CASE("generate_synthetic: zero effect exceedance rate matches the null") {
  // For 100/100 classes the bound is 2.5 standard errors of the difference,
  // so about 1.2% of null features exceed it.
  SyntheticSpec spec{200, 4000, 5, 0.0, 0.5, 17};
  const auto data = generate_synthetic(spec);
  const double bound = 5.0 / std::sqrt(200.0);
  std::size_t over = 0;
  for (std::size_t f = 0; f < spec.n_features; ++f) {
    over += std::abs(oracle::class_mean_difference(data.matrix, f)) >= bound;
  }
  const double rate = static_cast<double>(over) / static_cast<double>(spec.n_features);
  CHECK(rate < 0.025);
}

TEST_CASE("generate_synthetic: planted gaps near the requested effect") {
  SyntheticSpec spec{200, 1000, 20, 2.0, 0.5, 7};
  const auto data = generate_synthetic(spec);
  REQUIRE(data.planted.size() == 20);
  CHECK(data.matrix.count_label(1) == 100);
  for (auto f : data.planted) {
    const double gap = oracle::standardized_gap(data.matrix, f);
    CHECK(gap >= 1.5);
    CHECK(gap <= 2.5);
  }
}

TEST_CASE("generate_synthetic: deterministic for a seed, different across seeds") {
  SyntheticSpec spec{60, 80, 4, 1.0, 0.4, 99};
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  CHECK(std::equal(a.matrix.raw().begin(), a.matrix.raw().end(), b.matrix.raw().begin()));
  CHECK(a.planted == b.planted);
  CHECK(a.matrix.count_label(1) == 24);
  spec.seed = 100;
  const auto c = generate_synthetic(spec);
  CHECK_FALSE(std::equal(a.matrix.raw().begin(), a.matrix.raw().end(), c.matrix.raw().begin()));
}

TEST_CASE("generate_synthetic: precondition checks") {
  CHECK_THROWS_AS(generate_synthetic({10, 5, 6, 1.0, 0.5, 1}), Error);
  CHECK_THROWS_AS(generate_synthetic({10, 5, 2, -1.0, 0.5, 1}), Error);
  CHECK_THROWS_AS(generate_synthetic({10, 5, 2, 1.0, 1.0, 1}), Error);
  CHECK_THROWS_AS(generate_synthetic({3, 5, 2, 1.0, 0.5, 1}), Error);
}
