#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expanse/classifier.hpp"
#include "expanse/grid.hpp"
#include "expanse/initial_conditions.hpp"
#include "expanse/solver.hpp"

namespace expanse {

/// Parse or validation failure naming the offending field and, when known,
/// the line it came from.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, std::string field = {}, int line = 0);
  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct OutputSpec {
  bool records = true;
  std::size_t snapshot_every = 0;  // 0 disables snapshots
  bool plots = false;
  double K0 = 1.0;
};

struct SweepAxis {
  std::string name;  // one of p, sigma, a1, omega, lambda
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::size_t max_points = 10000;
  bool simulate = false;
};

struct Scenario {
  std::string name;
  classifier::ProblemSpec spec;
  double mass = 1.0;
  double hbar = 1.0;
  Nonlinearity nonlinearity = Nonlinearity::GaugeInvariant;
  GridSpec grid;
  InitialSpec initial;
  bool s_end_horizon = false;
  double s_end = 1.0;
  double step = 1e-3;
  std::optional<std::size_t> max_steps;
  Safeguards safeguards;
  OutputSpec outputs;
  classifier::EnergySign energy_sign = classifier::EnergySign::Unknown;
  bool weighted_l2 = false;
  SweepSpec sweep;
  /// Sorted "key=value" lines of the parsed file; input to the scenario hash.
  std::string canonical;

  [[nodiscard]] SolverConfig solver_config() const;
  /// Target s-time with "horizon" resolved to S₀; ConfigError when S₀ = ∞.
  [[nodiscard]] double resolved_s_end() const;
  /// Checks the fields a simulation needs (grid, dimension match, s_end ≤ S₀).
  void validate_for_run() const;
};

/// Flattened "section.key" → value map with the line each key came from.
struct ConfigTable {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
};

/// INI-style text: "[section]" headers, "key = value" lines, '#' or ';'
/// comments. Dotted keys outside any section are accepted.
ConfigTable parse_config_text(const std::string& text);

Scenario scenario_from_table(const ConfigTable& table, const std::string& default_name);
Scenario load_scenario(const std::string& path);

/// Number parser shared with sweeps: plain reals, ratios "7/3" and "pi",
/// "pi/4", "3*pi/8".
double parse_real(const std::string& text);
/// "linspace(a, b, n)" or a comma list, optionally in brackets.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace expanse
