#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's closed forms.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "expanse/grid.hpp"
#include "expanse/scale_factor.hpp"

namespace oracle {

inline double integrate(const auto& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, 1e-13);
}

/// a(t) written out from the Einstein-equation solution.
inline double scale_a(const expanse::ScaleFactorParams& p, double t) {
  if (p.sigma == -1.0) return p.a0 * std::exp(p.a1 * t / p.a0);
  const double kappa = p.n * (1.0 + p.sigma) * p.a1 / (2.0 * p.a0);
  const double beta = 2.0 / (p.n * (1.0 + p.sigma));
  return p.a0 * std::pow(1.0 + kappa * t, beta);
}

inline double time_horizon(const expanse::ScaleFactorParams& p) {
  const double r = (1.0 + p.sigma) * p.a1;
  if (r >= 0.0) return std::numeric_limits<double>::infinity();
  return -2.0 * p.a0 / (p.n * r);
}

/// s(t) by adaptive quadrature of a⁻².
inline double s_of_t(const expanse::ScaleFactorParams& p, double t) {
  return integrate([&](double x) { return 1.0 / (scale_a(p, x) * scale_a(p, x)); }, 0.0, t);
}

/// ∫₀^{T₀} a⁻² dt over the whole time horizon. Power laws are integrated
/// in y = |ln(1 + κt)|, which turns the algebraic tail into an exponential one.
inline double s_horizon(const expanse::ScaleFactorParams& p) {
  boost::math::quadrature::exp_sinh<double> es;
  const double inf = std::numeric_limits<double>::infinity();
  if (p.sigma == -1.0) {
    return es.integrate([&](double t) { return 1.0 / (scale_a(p, t) * scale_a(p, t)); }, 0.0, inf);
  }
  const double kappa = p.n * (1.0 + p.sigma) * p.a1 / (2.0 * p.a0);
  const double beta = 2.0 / (p.n * (1.0 + p.sigma));
  // 1 + κt = e^{±y}, dt = e^{±y}dy/|κ|, a⁻² = a₀⁻²e^{∓2βy}.
  const double dir = kappa > 0.0 ? 1.0 : -1.0;
  auto g = [&](double y) { return std::exp(dir * (1.0 - 2.0 * beta) * y) / (std::abs(kappa) * p.a0 * p.a0); };
  return es.integrate(g, 0.0, inf);
}

/// A over the t-window (0, T): sup of a²w^{p−1} when q = ∞, otherwise the
/// q-th root of ∫₀ᵀ (a²w^{p−1})^q a⁻² dt.
inline double A_norm(const expanse::ScaleFactorParams& bg, double p, double mu0, double T) {
  const int n = bg.n;
  auto weight = [&](double t) {
    const double a = scale_a(bg, t);
    const double w = std::pow(bg.a0 / a, 0.5 * n);
    return a * a * std::pow(w, p - 1.0);
  };
  const double inv_q = 1.0 - (p - 1.0) * (n - 2.0 * mu0) / 4.0;
  if (inv_q <= 1e-14) return std::max(weight(0.0), weight(T));
  const double q = 1.0 / inv_q;
  // The weight is monotone in t; dividing by its largest value keeps the
  // q-th power in range.
  const double top = std::max(weight(0.0), weight(T));
  const double Aq = integrate(
      [&](double t) {
        const double a = scale_a(bg, t);
        return std::pow(weight(t) / top, q) / (a * a);
      },
      0.0, T);
  return top * std::pow(Aq, inv_q);
}

/// Linear flow ∂ₛu = κ∂ₓ²u from u₀ = A·exp(−x²/(4b)) in one dimension.
inline expanse::Field heat_kernel_gaussian(const std::vector<double>& x, double amplitude, double b,
                                           std::complex<double> kappa, double s) {
  expanse::Field u(x.size());
  const std::complex<double> bs = b + kappa * s;
  const std::complex<double> pre = amplitude * std::sqrt(b / bs);
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = pre * std::exp(-x[i] * x[i] / (4.0 * bs));
  return u;
}

/// Rectangle-rule L² distance on a uniform grid of spacing h.
inline double l2_distance(const expanse::Field& a, const expanse::Field& b, double cell) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * cell);
}

}  // namespace oracle
