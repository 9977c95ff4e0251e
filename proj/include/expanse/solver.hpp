#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "expanse/grid.hpp"
#include "expanse/scale_factor.hpp"

namespace expanse {

enum class Nonlinearity { GaugeInvariant, GaugeVariant };

std::string_view to_string(Nonlinearity nl);

struct Safeguards {
  /// Amplitude threshold as a multiple of the initial max|u|.
  double amp_factor = 1e6;
  /// Absolute amplitude threshold; overrides amp_factor when > 0.
  double amp_threshold = 0.0;
  /// Bernoulli denominator at or below which a substep counts as blow-up.
  double denom_guard = 1e-12;
};

/// ±i(2m/ħ)∂ₛu + e^{−2iω}Δu − λe^{−2iω}a²|uw|^{p−1}u = 0 and its stepping.
struct SolverConfig {
  int sign = +1;
  double omega = 0.0;
  Complex lambda{0.0, 0.0};
  double p = 3.0;
  double mass = 1.0;
  double hbar = 1.0;
  ScaleFactorParams background{};
  Nonlinearity nonlinearity = Nonlinearity::GaugeInvariant;
  double step = 1e-3;
  Safeguards safeguards{};

  /// Throws InvalidConfig for sign ∉ {±1}, ω outside (−π/2, π/2], sign·ω
  /// outside [0, π/2], p < 1, m ≤ 0, ħ ≤ 0 or Δs ≤ 0.
  void validate() const;
  /// ħ/2m.
  [[nodiscard]] double diffusivity() const { return hbar / (2.0 * mass); }
};

enum class RunStatus { Running, ReachedHorizon, BlownUp, Finished };

std::string_view to_string(RunStatus status);

struct FieldState {
  GridSpec grid;
  double s = 0.0;
  std::size_t step = 0;
  Field u;
  RunStatus status = RunStatus::Running;
  /// Interval [lo, hi] of s in which blow-up was detected.
  double blowup_lo = 0.0;
  double blowup_hi = 0.0;
};

struct EvolveSummary {
  RunStatus status = RunStatus::Running;
  double s_final = 0.0;
  std::size_t steps = 0;
  double blowup_lo = 0.0;
  double blowup_hi = 0.0;
  /// max|u| at s = 0 and the amplitude threshold in force.
  double initial_max = 0.0;
  double amp_threshold = 0.0;
  /// Last accepted field.
  Field final_u;
};

/// Observer invoked on the initial state and after every accepted step.
using StepObserver = std::function<void(const FieldState&)>;

/// Strang split-step pseudospectral integrator.
///
/// The linear substep is the exact Fourier multiplier
/// exp(−sign·i(ħ/2m)e^{−2iω}|ξ|²ds). The nonlinear substep integrates
/// ∂ₛu = c(s)|u|^{p−1}u pointwise in closed form with c frozen at the step
/// midpoint. One solver drives one evolution at a time.
class SplitStepSolver {
 public:
  SplitStepSolver(SolverConfig cfg, const GridSpec& grid);

  [[nodiscard]] const SolverConfig& config() const { return cfg_; }
  [[nodiscard]] const SpectralGrid& grid() const { return *grid_; }
  [[nodiscard]] const ScaleFactor& background() const { return bg_; }
  [[nodiscard]] int dimension() const { return grid_->spec().dim; }

  /// c(s) = −sign·i(ħλ/2m)e^{−2iω}a(s)²w(s)^{p−1}.
  [[nodiscard]] Complex coupling(double s) const;

  void linear_half_step(FieldState& st, double ds) const;
  /// Returns false and marks the state BlownUp (leaving u untouched) when the
  /// Bernoulli denominator falls to denom_guard or a value becomes non-finite.
  bool nonlinear_step(FieldState& st, double ds) const;
  /// L(Δ/2)∘N(Δ)∘L(Δ/2) with Δ = min(step, s_limit − s). Commits only if
  /// the step succeeds and max|u| stays below `amp_threshold`.
  void strang_step(FieldState& st, double s_limit, double amp_threshold) const;

  /// ∂ₛu from the right-hand side, with a spectral Laplacian.
  void time_derivative(const Field& u, double s, Field& du) const;

  /// Evolve from u0 to s_end ≤ S₀, calling `observer` on every record.
  /// Stops early at blow-up or after `max_steps` accepted steps (status Finished).
  EvolveSummary evolve(Field u0, double s_end, const StepObserver& observer,
                       std::optional<std::size_t> max_steps = std::nullopt) const;

 private:
  void apply_multiplier(Field& u, double ds) const;

  SolverConfig cfg_;
  std::shared_ptr<const SpectralGrid> grid_;
  ScaleFactor bg_;
};

}  // namespace expanse
