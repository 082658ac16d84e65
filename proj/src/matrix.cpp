#include "hybefs/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hybefs/csv.hpp"
#include "hybefs/error.hpp"
#include "hybefs/resampling.hpp"

namespace hybefs {

ExpressionMatrix::ExpressionMatrix(std::size_t n_samples, std::vector<double> column_major,
                                   std::vector<std::string> feature_names,
                                   std::vector<Label> labels)
    : values_(std::move(column_major)), names_(std::move(feature_names)),
      labels_(std::move(labels)) {
  if (labels_.size() != n_samples) {
    fail(ErrorKind::data, "label count " + std::to_string(labels_.size()) +
                              " does not match sample count " + std::to_string(n_samples));
  }
  if (values_.size() != n_samples * names_.size()) {
    fail(ErrorKind::data, "value buffer size does not match samples x features");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      fail(ErrorKind::data, "non-finite value at row " + std::to_string(i % n_samples) +
                                ", feature " + std::to_string(i / std::max<std::size_t>(n_samples, 1)));
    }
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) fail(ErrorKind::data, "duplicate feature name '" + name + "'");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1) fail(ErrorKind::data, "non-binary label at row " + std::to_string(i));
  }
}

std::size_t ExpressionMatrix::count_label(Label c) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

ExpressionMatrix ExpressionMatrix::select_rows(std::span<const std::size_t> rows) const {
  const std::size_t n = n_samples();
  std::vector<double> values(rows.size() * n_features());
  std::vector<Label> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) labels[r] = labels_[rows[r]];
  for (std::size_t f = 0; f < n_features(); ++f) {
    const double* src = values_.data() + f * n;
    double* dst = values.data() + f * rows.size();
    for (std::size_t r = 0; r < rows.size(); ++r) dst[r] = src[rows[r]];
  }
  ExpressionMatrix out;
  out.values_ = std::move(values);
  out.names_ = names_;
  out.labels_ = std::move(labels);
  return out;
}

ExpressionMatrix ExpressionMatrix::select_columns(std::span<const std::size_t> features) const {
  const std::size_t n = n_samples();
  ExpressionMatrix out;
  out.values_.resize(features.size() * n);
  out.names_.reserve(features.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    std::copy_n(values_.data() + features[j] * n, n, out.values_.data() + j * n);
    out.names_.push_back(names_[features[j]]);
  }
  out.labels_ = labels_;
  return out;
}

void require_both_classes(const ExpressionMatrix& m, std::size_t min_per_class) {
  for (Label c : {Label{0}, Label{1}}) {
    const std::size_t count = m.count_label(c);
    if (count < min_per_class) {
      fail(ErrorKind::data, "class " + std::to_string(c) + " has " + std::to_string(count) +
                                " samples; at least " + std::to_string(min_per_class) +
                                " required (single-class data?)");
    }
  }
}

namespace {

std::string coord(std::size_t line, std::size_t column, const std::string& header) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column + 1) + " ('" +
         header + "')";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

ExpressionMatrix parse_csv(std::string_view text, const CsvOptions& options) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorKind::data, "empty file: header row missing");

  const auto header = csv::split_record(lines[0]);
  std::size_t label_col = header.size();
  std::size_t id_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.label_column) label_col = c;
    else if (!options.id_column.empty() && header[c] == options.id_column) id_col = c;
  }
  if (label_col == header.size()) {
    fail(ErrorKind::data, "missing label column '" + options.label_column + "' in header");
  }

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col || c == id_col) continue;
    feature_cols.push_back(c);
    names.push_back(header[c]);
  }
  {
    std::unordered_set<std::string_view> seen;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (!seen.insert(names[j]).second) {
        fail(ErrorKind::data, "duplicate feature name at " + coord(1, feature_cols[j], names[j]));
      }
    }
  }

  const std::size_t n_rows = lines.size() - 1;
  std::vector<double> values(n_rows * names.size());
  std::vector<Label> labels(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t line_no = r + 2;
    const auto fields = csv::split_record(lines[r + 1]);
    if (fields.size() != header.size()) {
      fail(ErrorKind::data, "line " + std::to_string(line_no) + " has " +
                                std::to_string(fields.size()) + " fields, header has " +
                                std::to_string(header.size()));
    }
    const std::string_view lab = trim(fields[label_col]);
    if (lab == "0") labels[r] = 0;
    else if (lab == "1") labels[r] = 1;
    else {
      fail(ErrorKind::data, "non-binary label '" + std::string(lab) + "' at " +
                                coord(line_no, label_col, header[label_col]));
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const std::string_view cell = trim(fields[feature_cols[j]]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        fail(ErrorKind::data, "non-numeric cell '" + std::string(cell) + "' at " +
                                  coord(line_no, feature_cols[j], names[j]));
      }
      values[j * n_rows + r] = v;
    }
  }

  ExpressionMatrix m(n_rows, std::move(values), std::move(names), std::move(labels));
  require_both_classes(m, 1);
  return m;
}

ExpressionMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::data, "cannot open dataset '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str(), options);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::string to_csv(const ExpressionMatrix& m, const std::string& label_column) {
  std::string out;
  for (const auto& name : m.feature_names()) {
    out += csv::quote(name);
    out += ',';
  }
  out += csv::quote(label_column);
  out += '\n';
  for (std::size_t s = 0; s < m.n_samples(); ++s) {
    for (std::size_t f = 0; f < m.n_features(); ++f) {
      out += csv::format_real(m.at(s, f));
      out += ',';
    }
    out += m.labels()[s] ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const ExpressionMatrix& m,
               const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::runtime, "cannot write '" + path.string() + "'");
  out << to_csv(m, label_column);
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_informative > spec.n_features) {
    fail(ErrorKind::config, "n_informative exceeds n_features");
  }
  if (!(spec.effect_size >= 0.0) || !std::isfinite(spec.effect_size)) {
    fail(ErrorKind::config, "effect_size must be finite and >= 0");
  }
  if (!(spec.class_balance > 0.0 && spec.class_balance < 1.0)) {
    fail(ErrorKind::config, "class_balance must lie in (0, 1)");
  }
  const std::size_t n = spec.n_samples;
  const auto n_pos = static_cast<std::size_t>(std::llround(spec.class_balance * static_cast<double>(n)));
  if (n_pos < 2 || n - n_pos < 2) {
    fail(ErrorKind::config, "synthetic spec yields fewer than 2 samples in a class");
  }

  std::vector<Label> labels(n, 0);
  std::fill_n(labels.begin(), n_pos, Label{1});
  Rng label_rng(derive_stream(spec.seed, {0}));
  for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[uniform_index(label_rng, i)]);

  std::vector<std::size_t> ids(spec.n_features);
  for (std::size_t f = 0; f < ids.size(); ++f) ids[f] = f;
  Rng pick_rng(derive_stream(spec.seed, {1}));
  for (std::size_t i = 0; i < spec.n_informative; ++i) {
    std::swap(ids[i], ids[i + uniform_index(pick_rng, ids.size() - i)]);
  }
  std::vector<std::size_t> planted(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(spec.n_informative));
  std::sort(planted.begin(), planted.end());
  std::vector<bool> informative(spec.n_features, false);
  for (auto f : planted) informative[f] = true;

  const int width = static_cast<int>(std::to_string(std::max<std::size_t>(spec.n_features, 1) - 1).size());
  std::vector<std::string> names(spec.n_features);
  std::vector<double> values(n * spec.n_features);
  for (std::size_t f = 0; f < spec.n_features; ++f) {
    std::string digits = std::to_string(f);
    names[f] = "f" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;

    // One stream per column keeps the output independent of generation order.
    Rng rng(derive_stream(spec.seed, {2, f}));
    std::normal_distribution<double> noise(0.0, 1.0);
    const double shift = informative[f] ? spec.effect_size / 2.0 : 0.0;
    double* col = values.data() + f * n;
    for (std::size_t s = 0; s < n; ++s) col[s] = noise(rng) + (labels[s] ? shift : -shift);
  }

  return {ExpressionMatrix(n, std::move(values), std::move(names), std::move(labels)),
          std::move(planted)};
}

}  // namespace hybefs
