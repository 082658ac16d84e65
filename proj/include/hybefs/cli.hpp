#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybefs/evaluation.hpp"
#include "hybefs/matrix.hpp"
#include "hybefs/strategies.hpp"

namespace hybefs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRuntime = 3;

/// Fully resolved settings of a `run` invocation.
struct RunConfig {
  std::optional<std::filesystem::path> dataset;
  std::string dataset_name;
  CsvOptions csv;
  std::optional<SyntheticSpec> synthetic;
  std::vector<StrategySpec> strategies;
  std::size_t folds = 5;
  std::vector<std::size_t> thresholds = default_thresholds();
  std::uint64_t seed = 42;
  int workers = 1;
  std::filesystem::path out = "results";
  RankerParams rankers;
  GbmParams gbm;
};

/// Parses a config document. Relative paths resolve against `base_dir`.
/// Unknown keys and ill-typed values raise config errors naming the field.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// The config echoed into run_manifest.json; parse_run_config accepts it.
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const StrategySpec& spec);
StrategySpec strategy_from_json(const nlohmann::json& doc, std::size_t default_bootstraps);

/// Worker default: HYBEFS_WORKERS when set and valid, else 1.
int default_workers();

std::string metrics_csv(const std::string& dataset, const ExperimentResult& result);
std::string stability_csv(const std::string& dataset, const ExperimentResult& result);
std::string ranking_csv(const FeatureRanking& ranking, const ExpressionMatrix& data);

/// Writes metrics.csv, stability.csv, rankings/ and run_manifest.json.
void write_outputs(const RunConfig& config, const ExpressionMatrix& data,
                   const ExperimentResult& result, double wall_seconds);

/// Entry point shared by the executable and the tests; returns the exit code.
int main(int argc, const char* const* argv);

}  // namespace hybefs::cli
