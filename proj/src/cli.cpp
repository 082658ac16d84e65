#include "hybefs/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "hybefs/csv.hpp"
#include "hybefs/error.hpp"
#include "hybefs/kernels.hpp"
#include "hybefs/stability.hpp"

#ifndef HYBEFS_VERSION
#define HYBEFS_VERSION "0.0.0"
#endif

namespace hybefs::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  fail(ErrorKind::config, "config field '" + field + "': " + why);
}

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) config_error(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  const json& get(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t> ||
                    std::is_same_v<T, int>) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
          config_error(field(key), "expected a non-negative integer");
        }
        out = v.get<T>();
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) config_error(field(key), "expected a number");
        out = v.get<double>();
      } else {
        if (!v.is_string()) config_error(field(key), "expected a string");
        out = v.get<T>();
      }
    } catch (const json::exception& e) {
      config_error(field(key), e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) config_error(field(key), "unknown key");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

ErrorKind kind_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->kind();
  return ErrorKind::runtime;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::data: return kExitData;
    case ErrorKind::runtime: return kExitRuntime;
  }
  return kExitRuntime;
}

std::string fam_name(FirstStage::Method m) {
  return m == FirstStage::Method::borda ? "borda" : "stability_weighted";
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::runtime, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) fail(ErrorKind::runtime, "write failed for '" + path.string() + "'");
}

std::string sanitize_dir_name(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

ExpressionMatrix load_dataset(const RunConfig& config) {
  if (config.synthetic) return generate_synthetic(*config.synthetic).matrix;
  return load_csv(*config.dataset, config.csv);
}

}  // namespace

StrategySpec strategy_from_json(const json& doc, std::size_t default_bootstraps) {
  if (doc.is_string()) {
    const auto label = doc.get<std::string>();
    auto spec = find_builtin(label, default_bootstraps);
    if (!spec) fail(ErrorKind::config, "unknown strategy '" + label + "'");
    return *spec;
  }
  ObjectReader r(doc, "strategies[]");
  StrategySpec spec;
  r.read("label", spec.label);
  if (spec.label.empty()) config_error(r.field("label"), "required");
  std::string kind;
  r.read("kind", kind);
  const auto parsed_kind = parse_strategy_kind(kind);
  if (!parsed_kind) config_error(r.field("kind"), "expected single|homogeneous|heterogeneous|hybrid");
  spec.kind = *parsed_kind;
  if (!r.has("algorithms") || !r.get("algorithms").is_array()) {
    config_error(r.field("algorithms"), "expected an array of algorithm names");
  }
  for (const auto& a : r.get("algorithms")) {
    const auto parsed = a.is_string() ? parse_algorithm(a.get<std::string>()) : std::nullopt;
    if (!parsed) config_error(r.field("algorithms"), "unknown algorithm " + a.dump());
    spec.algorithms.push_back(*parsed);
  }
  const bool bagged = spec.kind == StrategyKind::homogeneous || spec.kind == StrategyKind::hybrid;
  spec.n_bootstraps = bagged ? default_bootstraps : 0;
  r.read("n_bootstraps", spec.n_bootstraps);
  std::string fam = "borda";
  r.read("fam", fam);
  if (fam == "borda") spec.fam = FirstStage::Method::borda;
  else if (fam == "stability_weighted") spec.fam = FirstStage::Method::stability_weighted;
  else config_error(r.field("fam"), "expected borda|stability_weighted");
  std::string sam = "borda";
  r.read("sam", sam);
  if (sam != "borda") config_error(r.field("sam"), "only borda is supported");
  r.finish();
  return spec;
}

json to_json(const StrategySpec& spec) {
  json algorithms = json::array();
  for (auto a : spec.algorithms) algorithms.push_back(std::string(to_string(a)));
  return {{"label", spec.label},
          {"kind", std::string(to_string(spec.kind))},
          {"algorithms", algorithms},
          {"n_bootstraps", spec.n_bootstraps},
          {"fam", fam_name(spec.fam)},
          {"sam", "borda"}};
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  RunConfig config;
  ObjectReader r(doc, "");
  if (r.has("dataset") == r.has("synthetic")) {
    fail(ErrorKind::config, "config needs exactly one of 'dataset' or 'synthetic'");
  }
  if (r.has("dataset")) {
    ObjectReader d(r.get("dataset"), "dataset");
    std::string path;
    d.read("path", path);
    if (path.empty()) config_error("dataset.path", "required");
    config.dataset = fs::path(path).is_absolute() ? fs::path(path) : base_dir / path;
    d.read("label_column", config.csv.label_column);
    d.read("id_column", config.csv.id_column);
    config.dataset_name = fs::path(path).stem().string();
    d.read("name", config.dataset_name);
    d.finish();
  } else {
    ObjectReader s(r.get("synthetic"), "synthetic");
    SyntheticSpec spec;
    s.read("samples", spec.n_samples);
    s.read("features", spec.n_features);
    s.read("informative", spec.n_informative);
    s.read("effect", spec.effect_size);
    s.read("balance", spec.class_balance);
    s.read("seed", spec.seed);
    config.dataset_name = "synthetic";
    s.read("name", config.dataset_name);
    s.finish();
    config.synthetic = spec;
  }

  std::size_t n_bootstraps = 50;
  r.read("n_bootstraps", n_bootstraps);
  if (!r.has("strategies") || (r.get("strategies").is_string() && r.get("strategies") == "builtin")) {
    config.strategies = builtin_roster(n_bootstraps);
  } else if (r.get("strategies").is_array()) {
    for (const auto& item : r.get("strategies")) {
      config.strategies.push_back(strategy_from_json(item, n_bootstraps));
    }
  } else {
    config_error("strategies", "expected \"builtin\" or an array of names / strategy objects");
  }

  r.read("folds", config.folds);
  if (r.has("thresholds")) {
    const json& th = r.get("thresholds");
    if (!th.is_array() || th.empty()) config_error("thresholds", "expected a non-empty array");
    config.thresholds.clear();
    for (const auto& v : th) {
      if (!v.is_number_unsigned()) config_error("thresholds", "entries must be positive integers");
      config.thresholds.push_back(v.get<std::size_t>());
    }
  }
  r.read("seed", config.seed);
  config.workers = default_workers();
  r.read("workers", config.workers);
  std::string out = "results";
  r.read("out", out);
  config.out = fs::path(out).is_absolute() ? fs::path(out) : base_dir / out;

  if (r.has("rankers")) {
    ObjectReader p(r.get("rankers"), "rankers");
    p.read("bins", config.rankers.bins);
    p.read("k_neighbors", config.rankers.k_neighbors);
    p.read("gamma", config.rankers.gamma);
    p.read("var_fraction", config.rankers.var_fraction);
    p.read("epochs", config.rankers.epochs);
    p.read("learning_rate", config.rankers.learning_rate);
    p.finish();
  }
  if (r.has("classifier")) {
    ObjectReader g(r.get("classifier"), "classifier");
    g.read("trees", config.gbm.trees);
    g.read("depth", config.gbm.depth);
    g.read("learning_rate", config.gbm.learning_rate);
    g.read("min_leaf", config.gbm.min_leaf);
    g.finish();
  }
  r.finish();

  if (config.folds < 2) config_error("folds", "must be at least 2");
  if (config.workers < 1) config_error("workers", "must be at least 1");
  if (config.rankers.bins < 2) config_error("rankers.bins", "must be at least 2");
  if (config.rankers.k_neighbors < 1) config_error("rankers.k_neighbors", "must be at least 1");
  if (!(config.rankers.gamma >= 0.0 && config.rankers.gamma <= 1.0)) config_error("rankers.gamma", "must lie in [0, 1]");
  if (!(config.rankers.var_fraction > 0.0 && config.rankers.var_fraction <= 1.0)) {
    config_error("rankers.var_fraction", "must lie in (0, 1]");
  }
  if (config.gbm.min_leaf < 1) config_error("classifier.min_leaf", "must be at least 1");
  for (const auto& spec : config.strategies) validate(spec);
  return config;
}

json to_json(const RunConfig& config) {
  json doc;
  if (config.synthetic) {
    const auto& s = *config.synthetic;
    doc["synthetic"] = {{"samples", s.n_samples},   {"features", s.n_features},
                        {"informative", s.n_informative}, {"effect", s.effect_size},
                        {"balance", s.class_balance}, {"seed", s.seed},
                        {"name", config.dataset_name}};
  } else {
    doc["dataset"] = {{"path", fs::absolute(*config.dataset).string()},
                      {"label_column", config.csv.label_column},
                      {"id_column", config.csv.id_column},
                      {"name", config.dataset_name}};
  }
  doc["strategies"] = json::array();
  for (const auto& spec : config.strategies) doc["strategies"].push_back(to_json(spec));
  doc["folds"] = config.folds;
  doc["thresholds"] = config.thresholds;
  doc["seed"] = config.seed;
  doc["workers"] = config.workers;
  doc["out"] = fs::absolute(config.out).string();
  doc["rankers"] = {{"bins", config.rankers.bins},
                    {"k_neighbors", config.rankers.k_neighbors},
                    {"gamma", config.rankers.gamma},
                    {"var_fraction", config.rankers.var_fraction},
                    {"epochs", config.rankers.epochs},
                    {"learning_rate", config.rankers.learning_rate}};
  doc["classifier"] = {{"trees", config.gbm.trees},
                       {"depth", config.gbm.depth},
                       {"learning_rate", config.gbm.learning_rate},
                       {"min_leaf", config.gbm.min_leaf}};
  return doc;
}

int default_workers() {
  if (const char* env = std::getenv("HYBEFS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  return 1;
}

std::string metrics_csv(const std::string& dataset, const ExperimentResult& result) {
  std::ostringstream out;
  out << "dataset,strategy,fold,threshold,roc_auc,pr_auc\n";
  for (const auto& m : result.metrics) {
    out << csv::quote(dataset) << ',' << csv::quote(m.strategy) << ',' << m.fold << ','
        << m.threshold << ',' << csv::format_real(m.roc_auc) << ',' << csv::format_real(m.pr_auc)
        << '\n';
  }
  return out.str();
}

std::string stability_csv(const std::string& dataset, const ExperimentResult& result) {
  std::ostringstream out;
  out << "dataset,strategy,threshold,kuncheva,high_stability_flag\n";
  for (const auto& s : result.stability) {
    out << csv::quote(dataset) << ',' << csv::quote(s.strategy) << ',' << s.threshold << ','
        << csv::format_real(s.kuncheva) << ',' << (is_high_stability(s.kuncheva) ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string ranking_csv(const FeatureRanking& ranking, const ExpressionMatrix& data) {
  std::ostringstream out;
  out << "rank,feature,score\n";
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const auto f = ranking.order[r];
    out << r + 1 << ',' << csv::quote(data.feature_names()[f]) << ','
        << csv::format_real(ranking.scores[f]) << '\n';
  }
  return out.str();
}

void write_outputs(const RunConfig& config, const ExpressionMatrix& data,
                   const ExperimentResult& result, double wall_seconds) {
  std::error_code ec;
  fs::create_directories(config.out / "rankings", ec);
  if (ec) fail(ErrorKind::runtime, "cannot create '" + config.out.string() + "': " + ec.message());
  write_file(config.out / "metrics.csv", metrics_csv(config.dataset_name, result));
  write_file(config.out / "stability.csv", stability_csv(config.dataset_name, result));
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    const auto dir = config.out / "rankings" / sanitize_dir_name(config.strategies[s].label);
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::runtime, "cannot create '" + dir.string() + "': " + ec.message());
    for (std::size_t fold = 0; fold < result.outputs[s].size(); ++fold) {
      const auto& output = result.outputs[s][fold];
      const std::string stem = "fold" + std::to_string(fold);
      if (output.ranking) {
        write_file(dir / (stem + ".csv"), ranking_csv(*output.ranking, data));
      } else {
        for (const auto& [th, ranking] : output.per_threshold) {
          write_file(dir / (stem + "_th" + std::to_string(th) + ".csv"), ranking_csv(ranking, data));
        }
      }
    }
  }
  const json manifest = {{"config", to_json(config)},
                         {"version", HYBEFS_VERSION},
                         {"seed", config.seed},
                         {"wall_time_seconds", wall_seconds},
                         {"ranker_calls", result.ranker_calls},
                         {"metric_records", result.metrics.size()},
                         {"stability_records", result.stability.size()}};
  write_file(config.out / "run_manifest.json", manifest.dump(2) + "\n");
}

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> workers, std::optional<std::string> out_dir) {
  const auto started = std::chrono::steady_clock::now();
  std::ifstream in(config_path);
  if (!in) fail(ErrorKind::config, "cannot open config '" + config_path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config '" + config_path + "' is not valid JSON: " + e.what());
  }
  RunConfig config = parse_run_config(doc, fs::absolute(config_path).parent_path());
  if (seed) config.seed = *seed;
  if (workers) {
    if (*workers < 1) fail(ErrorKind::config, "--workers must be at least 1");
    config.workers = *workers;
  }
  if (out_dir) config.out = fs::absolute(*out_dir);

  const ExpressionMatrix data = load_dataset(config);
  require_both_classes(data, config.folds);
  ExperimentOptions options;
  options.folds = config.folds;
  options.thresholds = config.thresholds;
  options.seed = config.seed;
  options.rankers = config.rankers;
  options.gbm = config.gbm;
  kernels::set_worker_count(config.workers);
  const auto result = run_experiment(data, config.strategies, options);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_outputs(config, data, result, wall);
  std::cout << "wrote " << result.metrics.size() << " metric and " << result.stability.size()
            << " stability records to " << config.out.string() << "\n";
  return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_file) {
  const auto data = generate_synthetic(spec);
  const fs::path out(out_file);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_csv(out, data.matrix);
  std::ostringstream planted;
  for (auto f : data.planted) planted << data.matrix.feature_names()[f] << '\n';
  write_file(out.parent_path() / "planted.txt", planted.str());
  return kExitOk;
}

int cmd_rank(const std::string& data_path, const std::string& strategy, const std::string& out_file,
             const CsvOptions& csv_options, std::uint64_t seed, std::size_t n_bootstraps,
             std::optional<std::size_t> threshold, int workers) {
  auto spec = find_builtin(strategy, n_bootstraps);
  if (!spec) fail(ErrorKind::config, "unknown strategy '" + strategy + "'");
  const auto data = load_csv(data_path, csv_options);
  if (data.n_features() < 2) fail(ErrorKind::data, "ranking needs at least two features");
  const std::size_t th = threshold.value_or(std::min<std::size_t>(50, data.n_features() - 1));
  kernels::set_worker_count(workers);
  const std::size_t ths[] = {th};
  const auto output = run_strategy(data, *spec, ths, seed);
  const fs::path out(out_file);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_file(out, ranking_csv(output.at(th), data));
  return kExitOk;
}

}  // namespace

int main(int argc, const char* const* argv) {
  CLI::App app{"Hybrid ensemble feature selection: rankers, rank aggregation, stability and "
               "cross-validated evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HYBEFS_VERSION);

  auto* run = app.add_subcommand("run", "Cross-validated strategy comparison driven by a JSON config");
  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_workers;
  std::optional<std::string> run_out;
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", run_seed, "Master seed (overrides config)");
  run->add_option("--workers", run_workers, "Worker threads (overrides config and HYBEFS_WORKERS)");
  run->add_option("--out", run_out, "Output directory (overrides config)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with planted features");
  SyntheticSpec spec;
  std::string synth_out;
  synth->add_option("--samples", spec.n_samples)->required();
  synth->add_option("--features", spec.n_features)->required();
  synth->add_option("--informative", spec.n_informative)->required();
  synth->add_option("--effect", spec.effect_size)->required();
  synth->add_option("--seed", spec.seed)->required();
  synth->add_option("--balance", spec.class_balance, "Fraction of positive samples")->capture_default_str();
  synth->add_option("--out", synth_out, "Output CSV; planted.txt goes next to it")->required();

  auto* rank = app.add_subcommand(
      "rank", "Rank all features of a dataset with one strategy (exploratory, no CV)");
  std::string rank_data;
  std::string rank_strategy;
  std::string rank_out;
  CsvOptions rank_csv;
  std::uint64_t rank_seed = 42;
  std::size_t rank_bootstraps = 50;
  std::optional<std::size_t> rank_threshold;
  int rank_workers = default_workers();
  rank->add_option("--data", rank_data, "Dataset CSV")->required();
  rank->add_option("--strategy", rank_strategy, "Built-in strategy name, e.g. Hyb-EFS-Stb")->required();
  rank->add_option("--out", rank_out, "Output CSV (rank,feature,score)")->required();
  rank->add_option("--label", rank_csv.label_column, "Label column")->capture_default_str();
  rank->add_option("--id-column", rank_csv.id_column, "Ignored identifier column")->capture_default_str();
  rank->add_option("--seed", rank_seed)->capture_default_str();
  rank->add_option("--bootstraps", rank_bootstraps)->capture_default_str();
  rank->add_option("--threshold", rank_threshold, "Threshold for stability-weighted strategies");
  rank->add_option("--workers", rank_workers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, run_seed, run_workers, run_out);
    if (*synth) return cmd_synth(spec, synth_out);
    if (*rank) {
      return cmd_rank(rank_data, rank_strategy, rank_out, rank_csv, rank_seed, rank_bootstraps,
                      rank_threshold, rank_workers);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(kind_of(e));
  }
  return kExitConfig;
}

}  // namespace hybefs::cli
