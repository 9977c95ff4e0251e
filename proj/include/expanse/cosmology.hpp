#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "expanse/extended_real.hpp"

namespace expanse::cosmology {

enum class ModelKind {
  EquationOfState,   // p̃ = σρ̃c²
  MinkowskiMilne,    // ρ = Λ = 0
  NegativeLambda,    // ρ = 0, Λ < 0
  DeSitter,          // ρ = 0, Λ > 0
  MatterOnly,        // ρ > 0, Λ = 0 (Einstein–de Sitter / Friedmann)
  MatterWithLambda,  // ρ > 0, Λ > 0
};

std::string_view to_string(ModelKind kind);

/// Uniform isotropic background b(x⁰) in n spatial dimensions.
///
/// For every kind except EquationOfState, b obeys the first-order relation
/// (∂₀b)² = R b^{2−n} + L b² − k²/q² with R = 2κρc²bⁿ/(n(n−1)) and
/// L = 2Λ/(n(n−1)). `branch` selects the ± sign where the closed form has one
/// (+1 expanding, −1 contracting).
struct CosmologyModel {
  ModelKind kind = ModelKind::EquationOfState;
  int n = 3;
  double sigma = 0.0;
  double R = 0.0;
  double L = 0.0;
  double curvature_ratio = 0.0;  // k²/q², real
  double b0 = 1.0;
  double db0 = 0.0;
  int branch = +1;

  void validate() const;
  /// Open interval of x⁰ on which b is defined and positive.
  [[nodiscard]] double domain_start() const;
  [[nodiscard]] ExtendedReal domain_end() const;
};

/// Closed-form b(x⁰). The curved matter-only models solve the printed
/// θ-quadrature relation numerically. MatterWithLambda supports only the
/// static configuration; other subcases throw UnsupportedCase.
double eval_b(const CosmologyModel& model, double x0);

/// |(∂₀b)² − F(b)| with ∂₀b from 4th-order central differences. F is the
/// remark's right-hand side, or the k = 0 form of (G00) for EquationOfState.
double friedmann_residual(const CosmologyModel& model, double x0);

/// Residual of ∂₀²b/b + (2/(n−1))·((n−2+nσ)/(2n))·κρ̃c² with ρ̃ from the
/// equation-of-state solution. EquationOfState models only.
double raychaudhuri_residual(const CosmologyModel& model, double x0, double sigma);

/// |∂₀(κρ̃c²bⁿ) + σκρ̃c² ∂₀bⁿ|. EquationOfState models only.
double mass_conservation_residual(const CosmologyModel& model, double x0, double sigma);

/// κ̃ρc² along an EquationOfState solution, i.e. κ times the energy density.
double scaled_density(const CosmologyModel& model, double x0, double sigma);

/// Generalised gravitational coupling 2(n−1)π^{n/2}G/((n−2)Γ(n/2)c⁴).
double eval_kappa(int n, double G, double c);

// --- isotropy profile -------------------------------------------------------

struct IsotropyProfile {
  std::complex<double> q{1.0, 0.0};
  std::complex<double> k{0.0, 0.0};
};

/// f(r) = ln q² − 2 ln(1 + k²r²/4) and its first two derivatives.
struct ProfileJet {
  std::complex<double> f, df, d2f;
};
ProfileJet eval_profile(const IsotropyProfile& profile, double r);

/// |f″ − f′/r − (f′)²/2| from analytic derivatives.
double isotropy_residual(const IsotropyProfile& profile, double r);

// --- matter with Λ (case 5) -------------------------------------------------

/// Printed static threshold L₀ = (k²/2q²)^{n/(n−2)} R^{−2/(n−2)}.
double printed_static_threshold(int n, double R, double curvature_ratio);
/// Printed static scale b* = (R/L)^{1/n}.
double printed_static_scale(int n, double R, double L);
/// L at which F(b) = Rb^{2−n} + Lb² − K acquires a double root.
double double_root_threshold(int n, double R, double curvature_ratio);
/// Location of that double root, b_E^{n−2} = nR/(2K).
double double_root_scale(int n, double R, double curvature_ratio);

enum class Fate { TendsToInfinity, TendsToStatic, VanishesInFiniteTime, Undetermined };
std::string_view to_string(Fate fate);

struct FateReport {
  Fate fate = Fate::Undetermined;
  double x_end = 0.0;  // x⁰ where the integration stopped
  double b_end = 0.0;
};

/// Qualitative long-time behaviour of a MatterWithLambda model from
/// integrating ∂₀²b = F′(b)/2 with ∂₀b(0) = branch·√F(b₀).
FateReport integrate_fate(const CosmologyModel& model);

// --- catalogue --------------------------------------------------------------

struct CatalogueEntry {
  std::string name;
  CosmologyModel model;
  double sample_lo;  // interior sampling window for residual checks
  double sample_hi;
};

const std::vector<CatalogueEntry>& model_catalogue();
/// Lookup by name; throws std::out_of_range listing the known names.
const CatalogueEntry& find_model(std::string_view name);

}  // namespace expanse::cosmology
