#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hybefs {

using Label = std::uint8_t;

/// Dense samples x features matrix with binary labels.
///
/// Values are stored column-major: every ranker walks one feature at a time,
/// so a feature column is contiguous. Instances are immutable once built and
/// may be shared freely between threads.
class ExpressionMatrix {
 public:
  ExpressionMatrix() = default;

  /// `column_major` must hold n_samples * n_features values, feature by
  /// feature. Validates all invariants (finite values, unique names, binary
  /// labels); class presence is checked separately by `require_both_classes`.
  ExpressionMatrix(std::size_t n_samples, std::vector<double> column_major,
                   std::vector<std::string> feature_names,
                   std::vector<Label> labels);

  std::size_t n_samples() const noexcept { return labels_.size(); }
  std::size_t n_features() const noexcept { return names_.size(); }

  std::span<const double> column(std::size_t feature) const noexcept {
    return {values_.data() + feature * n_samples(), n_samples()};
  }
  double at(std::size_t sample, std::size_t feature) const noexcept {
    return values_[feature * n_samples() + sample];
  }

  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const std::string> feature_names() const noexcept { return names_; }
  std::span<const double> raw() const noexcept { return values_; }

  std::size_t count_label(Label c) const noexcept;

  /// Rows in the given order; repeated indices are allowed (bootstrap bags).
  ExpressionMatrix select_rows(std::span<const std::size_t> rows) const;
  /// Columns in the given order, names carried along.
  ExpressionMatrix select_columns(std::span<const std::size_t> features) const;

 private:
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::vector<Label> labels_;
};

/// Throws a data error unless each class holds at least `min_per_class` rows.
void require_both_classes(const ExpressionMatrix& m, std::size_t min_per_class = 2);

struct CsvOptions {
  std::string label_column = "class";
  /// Column dropped on read when present (empty: none).
  std::string id_column = "sample_id";
};

ExpressionMatrix load_csv(const std::filesystem::path& path,
                          const CsvOptions& options = {});
ExpressionMatrix parse_csv(std::string_view text, const CsvOptions& options = {});

/// Canonical writer: features in order, label column last, reals with 17
/// significant digits so that parse_csv reproduces every bit.
std::string to_csv(const ExpressionMatrix& m, const std::string& label_column = "class");
void write_csv(const std::filesystem::path& path, const ExpressionMatrix& m,
               const std::string& label_column = "class");

struct SyntheticSpec {
  std::size_t n_samples = 200;
  std::size_t n_features = 1000;
  std::size_t n_informative = 20;
  double effect_size = 2.0;    // class-mean gap in within-class sd units
  double class_balance = 0.5;  // fraction of positives
  std::uint64_t seed = 7;
};

struct SyntheticData {
  ExpressionMatrix matrix;
  std::vector<std::size_t> planted;  // ascending feature ids
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace hybefs
