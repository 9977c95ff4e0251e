#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expanse/config.hpp"
#include "expanse/solver.hpp"

namespace expanse {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kClassifierRejection = 3;
inline constexpr int kBlowUp = 10;
}  // namespace exit_code

/// Pre-flight refusal naming the violated hypothesis.
class ClassifierRejection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> max_steps;
  bool quiet = true;
};

struct RunManifest {
  std::string name;
  std::string scenario_hash;
  std::string tool_version = kToolVersion;
  std::string start_time;
  std::string end_time;
  RunStatus status = RunStatus::Running;
  double s_final = 0.0;
  std::size_t steps = 0;
  double blowup_lo = 0.0;
  double blowup_hi = 0.0;
  std::string theorem1;
  std::vector<std::string> files;
};

/// Throws ClassifierRejection when Theorem 1 does not cover the spec.
void preflight(const Scenario& sc);

/// Simulate one scenario and write records, snapshots, plot script and
/// manifest under out_dir/<name>/.
RunManifest run_scenario(Scenario sc, const RunOptions& opts);

struct BatchEntry {
  std::string path;
  std::optional<RunManifest> manifest;
  std::string error;
  int exit_code = exit_code::kSuccess;
};

struct BatchResult {
  std::vector<BatchEntry> entries;
  /// Most severe code: config error, then rejection, then blow-up.
  int exit_code = exit_code::kSuccess;
};

/// Run several config files in parallel, at most thread_cap() at a time.
/// Scenario names must be unique within the batch.
BatchResult run_batch(const std::vector<std::string>& paths, const RunOptions& opts);

/// Worker count from EXPANSE_SIM_THREADS (default: hardware concurrency).
std::size_t thread_cap();

/// Regime report text, or key=value lines when `kv` is set.
std::string classify_scenario(const Scenario& sc, bool kv);

struct SweepResult {
  std::string path;  // written table, empty when not written
  std::string table;
  std::size_t rows = 0;
};

/// Classifier row (and optional short simulation) per grid point. Throws
/// ConfigError when the grid exceeds sweep.max_points.
SweepResult sweep_scenario(const Scenario& sc, const RunOptions& opts, bool write_file = true);

}  // namespace expanse
