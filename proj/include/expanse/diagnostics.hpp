#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expanse/solver.hpp"

namespace expanse {

/// Per-record functionals. All spatial integrals use the rectangle rule on
/// the periodic grid; gradients are spectral.
struct DiagnosticsRecord {
  double s = 0.0;
  double mass = 0.0;        // ‖u‖₂²
  double charge = 0.0;      // (m/ħ)‖u‖₂²
  double grad_sq = 0.0;     // ‖∇u‖₂²
  double power_sum = 0.0;   // ∫|u|^{p+1}
  double coupling = 0.0;    // a²w^{p−1}
  double potential = 0.0;   // Re(λ)·a²w^{p−1}∫|u|^{p+1}/(p+1)
  double energy = 0.0;      // grad_sq/2 + potential
  double dsu_sq = 0.0;      // ‖∂ₛu‖₂²
  double mass_rate = 0.0;   // 2Re∫ū∂ₛu
  double i_rate = 0.0;      // ∫I at s
  double virial2 = 0.0;     // ∫|x|²|u|²
  double virial_rate = 0.0; // 2Re∫|x|²ū∂ₛu
  double heisenberg_slack = 0.0;
  double max_amp = 0.0;
  // Running quantities.
  double charge_residual = 0.0;
  double energy_residual = 0.0;
  double I_accum = 0.0;
  double K_value = 0.0;
  double charge_flux = 0.0;  // ∫₀ˢ(‖∇u‖² + Re(λ)a²w^{p−1}∫|u|^{p+1})
  double dissipation = 0.0;  // ∫₀ˢ‖∂ₛu‖²
};

/// Run constants needed to interpret a record series.
struct TrajectoryInfo {
  int sign = 1;
  double omega = 0.0;
  Complex lambda{0.0, 0.0};
  double p = 3.0;
  double mass = 1.0;
  double hbar = 1.0;
  int dim = 1;
  Nonlinearity nonlinearity = Nonlinearity::GaugeInvariant;
  ScaleFactorParams background{};
  double K0 = 1.0;

  static TrajectoryInfo from(const SolverConfig& cfg, int dim, double K0 = 1.0);
  /// True when the charge and energy identities apply (gauge-invariant, λ real).
  [[nodiscard]] bool identities_apply() const;
};

struct Trajectory {
  TrajectoryInfo info;
  std::vector<DiagnosticsRecord> records;
};

/// Builds a Trajectory while a solver runs; pass observer() to evolve().
///
/// Residual and K columns are filled incrementally with the same trapezoid
/// sums that charge_balance / energy_balance / concavity_watch use, so the
/// streamed and recomputed series agree exactly. Residuals are NaN when the
/// identities do not apply.
class DiagnosticsTracker {
 public:
  explicit DiagnosticsTracker(const SplitStepSolver& solver, double K0 = 1.0);

  const DiagnosticsRecord& observe(const FieldState& st);
  [[nodiscard]] StepObserver observer();

  [[nodiscard]] const Trajectory& trajectory() const { return traj_; }
  [[nodiscard]] Trajectory take() { return std::move(traj_); }

 private:
  const SplitStepSolver& solver_;
  Trajectory traj_;
  Field du_;
};

/// Functionals of a single field at time s (no running sums filled in).
DiagnosticsRecord measure(const SplitStepSolver& solver, const Field& u, double s);

/// (m/ħ)(‖u(s)‖² − ‖u₀‖²) + sign·sin2ω·∫₀ˢ(‖∇u‖² + λa²w^{p−1}∫|u|^{p+1}).
/// Throws NotApplicable for gauge-variant runs or complex λ.
std::vector<double> charge_balance(const Trajectory& traj);

/// E(s) − E(0) + sign·(2m sin2ω/ħ)∫₀ˢ‖∂ₛu‖² + ∫₀ˢ∫I. Same preconditions.
std::vector<double> energy_balance(const Trajectory& traj);

struct VirialPoint {
  double s;
  double v2;
  double dv2;        // from the spectral rate
  double d2v2;       // second difference of v2 over neighbouring records
  double bound;      // ħ²n(p−1)E(s)/m²
  double slack;      // bound − d2v2
};

/// Virial series at interior records (the first and last records have no
/// centred second difference). Throws NotApplicable unless ω ∈ {0, π/2}.
std::vector<VirialPoint> virial_watch(const Trajectory& traj);

struct ConcavityReport {
  double K0 = 0.0;
  double alpha = 0.0;
  double S1 = 0.0;                   // K₀/(α‖u₀‖²)
  std::vector<double> K;             // K₀ + ∫₀ˢ‖u‖²
  std::vector<double> certificate;   // ∂ₛ²K·K − (1+α)(∂ₛK)²
  bool positive_everywhere = false;
  std::optional<std::size_t> first_nonpositive;
  std::vector<std::string> warnings;
};

/// Concavity functional for one (K₀, α). Warns instead of failing when the
/// certificate is not positive or the blow-up hypotheses are not met.
ConcavityReport concavity_watch(const Trajectory& traj, double K0, double alpha);

}  // namespace expanse
