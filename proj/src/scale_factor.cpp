#include "expanse/scale_factor.hpp"

#include <cmath>
#include <string>

namespace expanse {

namespace {

constexpr double kLogBranchTol = 1e-12;

bool is_vacuum(double sigma) { return sigma == -1.0; }

}  // namespace

void ScaleFactorParams::validate() const {
  if (n < 1) throw DomainError("scale factor: n must be >= 1, got " + std::to_string(n));
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("scale factor: a0 must be > 0");
  if (!std::isfinite(a1) || !std::isfinite(sigma)) throw DomainError("scale factor: a1 and sigma must be finite");
}

ExtendedReal horizon_T0(const ScaleFactorParams& params) {
  params.validate();
  const double s1 = 1.0 + params.sigma;
  if (s1 * params.a1 >= 0.0) return ExtendedReal::infinity();
  return ExtendedReal::finite(-2.0 * params.a0 / (params.n * s1 * params.a1));
}

ExtendedReal horizon_S0(const ScaleFactorParams& params) {
  params.validate();
  const double gap = 4.0 - params.n * (1.0 + params.sigma);
  const double key = params.a1 * gap;
  if (key > 0.0) return ExtendedReal::finite(2.0 / (params.a0 * params.a1 * gap));
  return ExtendedReal::infinity();
}

ScaleFactor::ScaleFactor(ScaleFactorParams params) : params_(params) {
  params_.validate();
  T0_ = horizon_T0(params_);
  S0_ = horizon_S0(params_);
  constant_ = params_.a1 == 0.0;
  if (is_vacuum(params_.sigma)) {
    exponential_ = true;
    return;
  }
  const double s1 = 1.0 + params_.sigma;
  kappa_ = params_.n * s1 * params_.a1 / (2.0 * params_.a0);
  beta_ = 2.0 / (params_.n * s1);
  // κ underflow with a1 ≠ 0 only happens for 1+σ at the edge of the double
  // range, where the power law is indistinguishable from its σ = −1 limit.
  if (!constant_ && kappa_ == 0.0) exponential_ = true;
  logarithmic_ = std::abs(2.0 * beta_ - 1.0) < kLogBranchTol;
  if (logarithmic_) S0_ = ExtendedReal::infinity();
}

double ScaleFactor::beta_exp() const {
  if (is_vacuum(params_.sigma)) throw DomainError("beta is undefined for sigma = -1");
  return beta_;
}

void ScaleFactor::check_time(double t) const {
  if (!(t >= 0.0) || !T0_.exceeds(t)) {
    throw DomainError("time " + format_double(t) + " outside [0, T0) with T0 = " + T0_.to_string());
  }
}

double ScaleFactor::eval_a(double t) const {
  check_time(t);
  const auto& p = params_;
  if (constant_) return p.a0;
  if (exponential_) return p.a0 * std::exp(p.a1 * t / p.a0);
  return p.a0 * std::exp(beta_ * std::log1p(kappa_ * t));
}

double ScaleFactor::eval_dadt(double t) const {
  check_time(t);
  const auto& p = params_;
  if (constant_) return 0.0;
  if (exponential_) return p.a1 * std::exp(p.a1 * t / p.a0);
  return p.a1 * std::exp((beta_ - 1.0) * std::log1p(kappa_ * t));
}

double ScaleFactor::eval_w(double t) const {
  const double a = eval_a(t);
  return std::pow(params_.a0 / a, 0.5 * params_.n);
}

double ScaleFactor::time_to_s(double t) const {
  check_time(t);
  const auto& p = params_;
  const double a0sq = p.a0 * p.a0;
  if (constant_) return t / a0sq;
  if (exponential_) {
    const double s = -std::expm1(-2.0 * p.a1 * t / p.a0) / (2.0 * p.a0 * p.a1);
    if (S0_.is_finite() && s >= S0_.value()) return std::nextafter(S0_.value(), 0.0);
    return s;
  }
  if (logarithmic_) return std::log1p(kappa_ * t) / (a0sq * kappa_);
  const double c = 1.0 - 2.0 * beta_;
  const double s = std::expm1(c * std::log1p(kappa_ * t)) / (a0sq * kappa_ * c);
  // Rounding can reach S₀ for large t; s(t) < S₀ for every finite t.
  if (S0_.is_finite() && s >= S0_.value()) return std::nextafter(S0_.value(), 0.0);
  return s;
}

double ScaleFactor::s_to_time(double s) const {
  if (!(s >= 0.0) || !S0_.exceeds(s)) {
    throw DomainError("s-time " + format_double(s) + " outside [0, S0) with S0 = " + S0_.to_string());
  }
  const auto& p = params_;
  const double a0sq = p.a0 * p.a0;
  double t = 0.0;
  if (constant_) {
    t = s * a0sq;
  } else if (exponential_) {
    t = -(p.a0 / (2.0 * p.a1)) * std::log1p(-2.0 * p.a0 * p.a1 * s);
  } else if (logarithmic_) {
    t = std::expm1(s * a0sq * kappa_) / kappa_;
  } else {
    const double c = 1.0 - 2.0 * beta_;
    t = std::expm1(std::log1p(s * a0sq * kappa_ * c) / c) / kappa_;
  }
  // Rounding can land exactly on a finite T₀ for s just below S₀.
  if (T0_.is_finite() && t >= T0_.value()) t = std::nextafter(T0_.value(), 0.0);
  return t;
}

double ScaleFactor::dads_at_s(double s) const {
  const double t = s_to_time(s);
  const double a = eval_a(t);
  return a * a * eval_dadt(t);
}

}  // namespace expanse
