#include "expanse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double max_abs(const Field& u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::abs(z));
  return m;
}

bool all_finite(const Field& u) {
  return std::all_of(u.begin(), u.end(), [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

/// −log1p(−x)/x with its x → 0 limit.
double log_ratio(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + x / 2.0 + x * x / 3.0;
  return -std::log1p(-x) / x;
}

}  // namespace

std::string_view to_string(Nonlinearity nl) {
  return nl == Nonlinearity::GaugeInvariant ? "gauge-invariant" : "gauge-variant";
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Running: return "running";
    case RunStatus::ReachedHorizon: return "reached-horizon";
    case RunStatus::BlownUp: return "blown-up";
    case RunStatus::Finished: return "finished";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (sign != 1 && sign != -1) throw InvalidConfig("sign must be +1 or -1");
  if (!(omega > -kHalfPi && omega <= kHalfPi)) throw InvalidConfig("omega must lie in (-pi/2, pi/2]");
  const double so = sign * omega;
  if (!(so >= 0.0 && so <= kHalfPi)) {
    throw InvalidConfig("sign/omega incompatible: need 0 <= sign*omega <= pi/2, got sign=" + std::to_string(sign) +
                        " omega=" + format_double(omega));
  }
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidConfig("p must be >= 1");
  if (!(mass > 0.0)) throw InvalidConfig("mass must be > 0");
  if (!(hbar > 0.0)) throw InvalidConfig("hbar must be > 0");
  if (!(step > 0.0)) throw InvalidConfig("step must be > 0");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw InvalidConfig("lambda must be finite");
  if (!(safeguards.denom_guard >= 0.0)) throw InvalidConfig("denom_guard must be >= 0");
  background.validate();
}

SplitStepSolver::SplitStepSolver(SolverConfig cfg, const GridSpec& grid)
    : cfg_(cfg), grid_(std::make_shared<const SpectralGrid>(grid)), bg_(cfg.background) {
  cfg_.validate();
}

Complex SplitStepSolver::coupling(double s) const {
  const double a = bg_.a_at_s(s);
  const double w = bg_.w_at_s(s);
  const Complex rot = std::polar(1.0, -2.0 * cfg_.omega);
  return -static_cast<double>(cfg_.sign) * Complex(0.0, 1.0) * cfg_.diffusivity() * rot * cfg_.lambda * a * a *
         std::pow(w, cfg_.p - 1.0);
}

void SplitStepSolver::apply_multiplier(Field& u, double ds) const {
  const double D = cfg_.diffusivity() * ds;
  const double s2 = std::sin(2.0 * cfg_.omega);
  const double c2 = std::cos(2.0 * cfg_.omega);
  // exponent per unit |ξ|²: sign·D·ds·(−sin2ω − i cos2ω)
  const double re = -cfg_.sign * D * s2;
  const double im = -cfg_.sign * D * c2;
  if (re > 0.0) throw InvalidConfig("linear multiplier would amplify modes");
  const auto& k2 = grid_->wavenumber_sq();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::exp(Complex(re * k2[i], im * k2[i]));
}

void SplitStepSolver::linear_half_step(FieldState& st, double ds) const {
  if (ds == 0.0) return;
  grid_->forward(st.u);
  apply_multiplier(st.u, ds);
  grid_->inverse(st.u);
}

bool SplitStepSolver::nonlinear_step(FieldState& st, double ds) const {
  if (cfg_.lambda == Complex(0.0, 0.0) || ds == 0.0) return true;
  const Complex c = coupling(st.s + 0.5 * ds);
  const double p = cfg_.p;
  Field out(st.u.size());

  if (cfg_.nonlinearity == Nonlinearity::GaugeVariant) {
    auto f = [&](Complex z) { return c * std::pow(std::abs(z), p); };
    for (std::size_t i = 0; i < st.u.size(); ++i) {
      const Complex z = st.u[i];
      const Complex k1 = f(z);
      const Complex k2 = f(z + 0.5 * ds * k1);
      const Complex k3 = f(z + 0.5 * ds * k2);
      const Complex k4 = f(z + ds * k3);
      out[i] = z + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  } else if (p == 1.0) {
    const Complex g = std::exp(c * ds);
    for (std::size_t i = 0; i < st.u.size(); ++i) out[i] = st.u[i] * g;
  } else {
    const double half = 0.5 * (p - 1.0);
    const double inv = -1.0 / (p - 1.0);
    for (std::size_t i = 0; i < st.u.size(); ++i) {
      const Complex z = st.u[i];
      const double n2 = std::norm(z);
      if (n2 == 0.0) {
        out[i] = z;
        continue;
      }
      const double r = p == 3.0 ? n2 : std::pow(n2, half);  // ρ₀^{p−1}
      const double x = (p - 1.0) * c.real() * r * ds;
      const double denom = 1.0 - x;
      if (denom <= cfg_.safeguards.denom_guard) {
        st.status = RunStatus::BlownUp;
        return false;
      }
      const double growth = p == 3.0 ? 1.0 / std::sqrt(denom) : std::pow(denom, inv);
      const double dtheta = c.imag() * r * ds * log_ratio(x);
      out[i] = z * growth * std::polar(1.0, dtheta);
    }
  }
  if (!all_finite(out)) {
    st.status = RunStatus::BlownUp;
    return false;
  }
  st.u.swap(out);
  return true;
}

void SplitStepSolver::strang_step(FieldState& st, double s_limit, double amp_threshold) const {
  if (st.status != RunStatus::Running) return;
  const double s0 = st.s;
  const double target = std::min(static_cast<double>(st.step + 1) * cfg_.step, s_limit);
  const double ds = target - s0;
  FieldState work{st.grid, s0, st.step, st.u, RunStatus::Running, 0.0, 0.0};
  linear_half_step(work, 0.5 * ds);
  const bool ok = nonlinear_step(work, ds);
  if (ok) linear_half_step(work, 0.5 * ds);
  if (!ok || !all_finite(work.u) || max_abs(work.u) > amp_threshold) {
    st.status = RunStatus::BlownUp;
    st.blowup_lo = s0;
    st.blowup_hi = target;
    return;
  }
  st.u.swap(work.u);
  st.s = target;
  st.step += 1;
}

void SplitStepSolver::time_derivative(const Field& u, double s, Field& du) const {
  grid_->laplacian(u, du);
  const Complex pre = static_cast<double>(cfg_.sign) * Complex(0.0, 1.0) * cfg_.diffusivity() *
                      std::polar(1.0, -2.0 * cfg_.omega);
  const bool nonlinear = cfg_.lambda != Complex(0.0, 0.0);
  const double a = nonlinear ? bg_.a_at_s(s) : 0.0;
  const Complex g = nonlinear ? cfg_.lambda * a * a * std::pow(bg_.w_at_s(s), cfg_.p - 1.0) : Complex(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Complex nl(0.0, 0.0);
    if (nonlinear) {
      const double r = std::abs(u[i]);
      nl = cfg_.nonlinearity == Nonlinearity::GaugeVariant ? g * std::pow(r, cfg_.p)
                                                           : g * std::pow(r, cfg_.p - 1.0) * u[i];
    }
    du[i] = pre * (du[i] - nl);
  }
}

EvolveSummary SplitStepSolver::evolve(Field u0, double s_end, const StepObserver& observer,
                                      std::optional<std::size_t> max_steps) const {
  const auto& spec = grid_->spec();
  if (u0.size() != spec.total()) throw InvalidConfig("initial field size does not match the grid");
  if (!all_finite(u0)) throw InvalidConfig("initial field contains non-finite values");
  const ExtendedReal& S0 = bg_.S0();
  if (!(s_end >= 0.0) || !std::isfinite(s_end)) throw InvalidConfig("s_end must be finite and >= 0");
  const bool to_horizon = S0.is_finite() && s_end >= S0.value();
  if (S0.is_finite() && s_end > S0.value()) {
    throw InvalidConfig("s_end = " + format_double(s_end) + " exceeds S0 = " + S0.to_string());
  }

  EvolveSummary sum;
  sum.initial_max = max_abs(u0);
  const auto& sg = cfg_.safeguards;
  sum.amp_threshold = sg.amp_threshold > 0.0 ? sg.amp_threshold : sg.amp_factor * std::max(sum.initial_max, 1e-300);

  FieldState st{spec, 0.0, 0, std::move(u0), RunStatus::Running, 0.0, 0.0};
  if (observer) observer(st);
  while (st.status == RunStatus::Running) {
    if (st.s >= s_end) {
      st.status = RunStatus::Finished;
      break;
    }
    if (max_steps && st.step >= *max_steps) {
      st.status = RunStatus::Finished;
      break;
    }
    strang_step(st, s_end, sum.amp_threshold);
    if (st.status == RunStatus::BlownUp) break;
    if (to_horizon && st.s >= s_end) {
      st.s = std::nextafter(S0.value(), 0.0);
      st.status = RunStatus::ReachedHorizon;
    }
    if (observer) observer(st);
  }
  sum.status = st.status;
  sum.s_final = st.s;
  sum.steps = st.step;
  sum.blowup_lo = st.blowup_lo;
  sum.blowup_hi = st.blowup_hi;
  sum.final_u = std::move(st.u);
  return sum;
}

}  // namespace expanse
