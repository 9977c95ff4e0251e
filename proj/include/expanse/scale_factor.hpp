#pragma once

#include "expanse/extended_real.hpp"

namespace expanse {

/// Background parameters: a(0)=a0, ∂ₜa(0)=a1, equation-of-state σ, dimension n.
struct ScaleFactorParams {
  int n = 1;
  double sigma = 0.0;
  double a0 = 1.0;
  double a1 = 0.0;

  /// Throws DomainError unless a0 > 0 and n >= 1.
  void validate() const;
};

/// Time horizon T₀: infinite when (1+σ)a₁ ≥ 0, else −2a₀/(n(1+σ)a₁).
ExtendedReal horizon_T0(const ScaleFactorParams& params);

/// s-time horizon S₀ = 2/(a₀a₁(4−n(1+σ))) when a₁(4−n(1+σ)) > 0, else infinite.
ExtendedReal horizon_S0(const ScaleFactorParams& params);

/// Power-law / exponential scale factor a(t) and the derived change of
/// variable s(t) = ∫₀ᵗ a(τ)⁻² dτ, all in closed form.
///
/// The power-law family is written a(t) = a₀(1+κ t)^β with
/// κ = n(1+σ)a₁/(2a₀) and β = 2/(n(1+σ)). The σ = −1 member is
/// a(t) = a₀ exp(a₁t/a₀). Instances are immutable and safe to share.
class ScaleFactor {
 public:
  explicit ScaleFactor(ScaleFactorParams params);

  [[nodiscard]] const ScaleFactorParams& params() const { return params_; }
  [[nodiscard]] double kappa_rate() const { return kappa_; }
  /// β = 2/(n(1+σ)); DomainError for σ = −1.
  [[nodiscard]] double beta_exp() const;
  [[nodiscard]] bool is_exponential() const { return exponential_; }
  [[nodiscard]] bool is_constant() const { return constant_; }
  [[nodiscard]] const ExtendedReal& T0() const { return T0_; }
  [[nodiscard]] const ExtendedReal& S0() const { return S0_; }

  /// a(t) for 0 ≤ t < T₀.
  [[nodiscard]] double eval_a(double t) const;
  /// ∂ₜa(t).
  [[nodiscard]] double eval_dadt(double t) const;
  /// w(t) = (a₀/a(t))^{n/2}.
  [[nodiscard]] double eval_w(double t) const;

  [[nodiscard]] double time_to_s(double t) const;
  /// Inverse of time_to_s for 0 ≤ s < S₀.
  [[nodiscard]] double s_to_time(double s) const;

  /// Conveniences in s-time: a(s), w(s) and da/ds = a² ∂ₜa.
  [[nodiscard]] double a_at_s(double s) const { return eval_a(s_to_time(s)); }
  [[nodiscard]] double w_at_s(double s) const { return eval_w(s_to_time(s)); }
  [[nodiscard]] double dads_at_s(double s) const;

 private:
  void check_time(double t) const;

  ScaleFactorParams params_;
  double kappa_ = 0.0;
  double beta_ = 0.0;
  bool exponential_ = false;
  bool constant_ = false;
  bool logarithmic_ = false;
  ExtendedReal T0_ = ExtendedReal::infinity();
  ExtendedReal S0_ = ExtendedReal::infinity();
};

}  // namespace expanse
