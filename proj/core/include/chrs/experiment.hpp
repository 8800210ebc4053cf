#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chrs/report.hpp"
#include "chrs/types.hpp"

namespace chrs {

/// Fully resolved experiment description. All defaults are filled in and all
/// caps pre-checked by resolve_config/parse_config; unknown keys are rejected.
struct ExperimentConfig {
  std::string experiment;
  long m = 0;
  long n = 0;
  long s = 0;
  long r = 1;
  long c = 1;
  long ell = 1;
  long t = 0;
  long lambda = 0;
  Mode mode = Mode::Exact;
  long samples = 0;
  long trials = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string strategy_state;
  std::string out;
  std::string csv;
  std::string dump;

  /// The resolved key=value lines; re-parsing them yields an equal config.
  std::vector<std::pair<std::string, std::string>> echo() const;
  std::string echo_text() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses a flat key = value config file ('#' starts a comment).
ExperimentConfig parse_config(const std::string& path);
/// Validates raw key/value pairs into a resolved config.
ExperimentConfig resolve_config(std::map<std::string, std::string> kv);

std::vector<std::string> experiment_names();

struct MetricValue {
  double value = 0.0;
  std::optional<double> stderr_value;
};

struct BoundEntry {
  double value = 0.0;
  bool applicable = false;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment_id;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, MetricValue>> metrics;
  std::vector<std::pair<std::string, BoundEntry>> bounds;
  std::int64_t wall_time_ms = 0;
  std::vector<std::string> artifact_paths;

  const MetricValue* metric(const std::string& name) const;
  const BoundEntry* bound(const std::string& name) const;
  /// True when every applicable bound passes.
  bool all_applicable_pass() const;
};

/// Executes the named experiment. All randomness is derived from config.seed.
ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_json(const ExperimentReport& report);
void write_report_json(const ExperimentReport& report, const std::string& path);
void write_report_csv(const ExperimentReport& report, const std::string& path);

/// Exit codes: 0 all applicable bounds pass, 1 some applicable bound fails,
/// 2 configuration error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitBoundFail = 1;
inline constexpr int kExitConfigError = 2;

}  // namespace chrs
