#include "expanse/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_dispersive(double omega) {
  return std::abs(omega) < 1e-15 || std::abs(omega - std::numbers::pi / 2.0) < 1e-12;
}

DiagnosticsRecord measure_into(const SplitStepSolver& solver, const Field& u, double s, Field& du) {
  const auto& cfg = solver.config();
  const auto& grid = solver.grid();
  const double hd = grid.spec().cell_volume();
  const auto& r2 = grid.radius_sq();
  du.resize(u.size());
  solver.time_derivative(u, s, du);

  DiagnosticsRecord r;
  r.s = s;
  const double q = cfg.p + 1.0;
  double mass = 0.0, power = 0.0, dsu = 0.0, rate = 0.0, v2 = 0.0, vrate = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double n2 = std::norm(u[i]);
    const double proj = (std::conj(u[i]) * du[i]).real();
    mass += n2;
    power += cfg.p == 3.0 ? n2 * n2 : std::pow(n2, 0.5 * q);
    dsu += std::norm(du[i]);
    rate += proj;
    v2 += r2[i] * n2;
    vrate += r2[i] * proj;
    peak = std::max(peak, n2);
  }
  r.mass = mass * hd;
  r.charge = cfg.mass / cfg.hbar * r.mass;
  r.grad_sq = grid.grad_sq(u);
  r.power_sum = power * hd;
  r.dsu_sq = dsu * hd;
  r.mass_rate = 2.0 * rate * hd;
  r.virial2 = v2 * hd;
  r.virial_rate = 2.0 * vrate * hd;
  r.max_amp = std::sqrt(peak);

  const auto& bg = solver.background();
  const double a = bg.a_at_s(s);
  r.coupling = a * a * std::pow(bg.w_at_s(s), cfg.p - 1.0);
  r.potential = cfg.lambda.real() * r.coupling * r.power_sum / q;
  r.energy = 0.5 * r.grad_sq + r.potential;
  const int nb = cfg.background.n;
  const double dads = bg.is_constant() ? 0.0 : bg.dads_at_s(s);
  r.i_rate = 0.5 * (nb * (cfg.p - 1.0) - 4.0) * (dads / a) * r.potential;
  const double n = grid.spec().dim;
  r.heisenberg_slack = (2.0 / n) * std::sqrt(r.grad_sq) * std::sqrt(r.virial2) - r.mass;
  return r;
}

/// Fill the running columns of `cur` from `prev` (nullptr for the first record).
void accumulate(const TrajectoryInfo& info, const DiagnosticsRecord& first, const DiagnosticsRecord* prev,
                DiagnosticsRecord& cur) {
  auto flux = [&](const DiagnosticsRecord& r) { return r.grad_sq + info.lambda.real() * r.coupling * r.power_sum; };
  if (prev == nullptr) {
    cur.charge_flux = cur.dissipation = cur.I_accum = 0.0;
    cur.K_value = info.K0;
  } else {
    const double h = 0.5 * (cur.s - prev->s);
    cur.charge_flux = prev->charge_flux + h * (flux(*prev) + flux(cur));
    cur.dissipation = prev->dissipation + h * (prev->dsu_sq + cur.dsu_sq);
    cur.I_accum = prev->I_accum + h * (prev->i_rate + cur.i_rate);
    cur.K_value = prev->K_value + h * (prev->mass + cur.mass);
  }
  if (!info.identities_apply()) {
    cur.charge_residual = cur.energy_residual = kNaN;
    return;
  }
  const double s2w = std::sin(2.0 * info.omega);
  cur.charge_residual = (cur.charge - first.charge) + info.sign * s2w * cur.charge_flux;
  cur.energy_residual = cur.energy - first.energy +
                        info.sign * (2.0 * info.mass * s2w / info.hbar) * cur.dissipation + cur.I_accum;
}

void require_identities(const TrajectoryInfo& info, const char* what) {
  if (info.nonlinearity == Nonlinearity::GaugeVariant) {
    throw NotApplicable(std::string(what) + " does not apply to the gauge-variant nonlinearity");
  }
  if (info.lambda.imag() != 0.0) throw NotApplicable(std::string(what) + " requires real lambda");
}

/// Re-run the accumulation over a copy of the records.
std::vector<DiagnosticsRecord> replay(const Trajectory& traj) {
  std::vector<DiagnosticsRecord> out = traj.records;
  for (std::size_t k = 0; k < out.size(); ++k) {
    accumulate(traj.info, out.front(), k == 0 ? nullptr : &out[k - 1], out[k]);
  }
  return out;
}

}  // namespace

TrajectoryInfo TrajectoryInfo::from(const SolverConfig& cfg, int dim, double K0) {
  TrajectoryInfo t;
  t.sign = cfg.sign;
  t.omega = cfg.omega;
  t.lambda = cfg.lambda;
  t.p = cfg.p;
  t.mass = cfg.mass;
  t.hbar = cfg.hbar;
  t.dim = dim;
  t.nonlinearity = cfg.nonlinearity;
  t.background = cfg.background;
  t.K0 = K0;
  return t;
}

bool TrajectoryInfo::identities_apply() const {
  return nonlinearity == Nonlinearity::GaugeInvariant && lambda.imag() == 0.0;
}

DiagnosticsRecord measure(const SplitStepSolver& solver, const Field& u, double s) {
  Field du;
  return measure_into(solver, u, s, du);
}

DiagnosticsTracker::DiagnosticsTracker(const SplitStepSolver& solver, double K0) : solver_(solver) {
  traj_.info = TrajectoryInfo::from(solver.config(), solver.dimension(), K0);
}

const DiagnosticsRecord& DiagnosticsTracker::observe(const FieldState& st) {
  auto rec = measure_into(solver_, st.u, st.s, du_);
  auto& recs = traj_.records;
  const DiagnosticsRecord& first = recs.empty() ? rec : recs.front();
  accumulate(traj_.info, first, recs.empty() ? nullptr : &recs.back(), rec);
  recs.push_back(rec);
  return recs.back();
}

StepObserver DiagnosticsTracker::observer() {
  return [this](const FieldState& st) { observe(st); };
}

std::vector<double> charge_balance(const Trajectory& traj) {
  require_identities(traj.info, "charge_balance");
  std::vector<double> out;
  for (const auto& r : replay(traj)) out.push_back(r.charge_residual);
  return out;
}

std::vector<double> energy_balance(const Trajectory& traj) {
  require_identities(traj.info, "energy_balance");
  std::vector<double> out;
  for (const auto& r : replay(traj)) out.push_back(r.energy_residual);
  return out;
}

std::vector<VirialPoint> virial_watch(const Trajectory& traj) {
  const auto& info = traj.info;
  if (!is_dispersive(info.omega)) {
    throw NotApplicable("virial_watch requires omega in {0, pi/2}, got " + format_double(info.omega));
  }
  const auto& r = traj.records;
  const double c = info.hbar * info.hbar * info.dim * (info.p - 1.0) / (info.mass * info.mass);
  std::vector<VirialPoint> out;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    const double h1 = r[k].s - r[k - 1].s;
    const double h2 = r[k + 1].s - r[k].s;
    const double d2 =
        2.0 * (h1 * r[k + 1].virial2 - (h1 + h2) * r[k].virial2 + h2 * r[k - 1].virial2) / (h1 * h2 * (h1 + h2));
    const double bound = c * r[k].energy;
    out.push_back({r[k].s, r[k].virial2, r[k].virial_rate, d2, bound, bound - d2});
  }
  return out;
}

ConcavityReport concavity_watch(const Trajectory& traj, double K0, double alpha) {
  if (!(K0 > 0.0) || !(alpha > 0.0)) throw InvalidConfig("concavity_watch needs K0 > 0 and alpha > 0");
  ConcavityReport rep;
  rep.K0 = K0;
  rep.alpha = alpha;
  const auto& r = traj.records;
  if (r.empty()) return rep;
  rep.S1 = K0 / (alpha * r.front().mass);
  double K = K0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k > 0) K += 0.5 * (r[k].s - r[k - 1].s) * (r[k].mass + r[k - 1].mass);
    rep.K.push_back(K);
    const double cert = r[k].mass_rate * K - (1.0 + alpha) * r[k].mass * r[k].mass;
    rep.certificate.push_back(cert);
    if (!(cert > 0.0) && !rep.first_nonpositive) rep.first_nonpositive = k;
  }
  rep.positive_everywhere = !rep.first_nonpositive.has_value();

  const auto& info = traj.info;
  if (rep.first_nonpositive) {
    rep.warnings.push_back("certificate not positive at s = " + format_double(r[*rep.first_nonpositive].s));
  }
  if (is_dispersive(info.omega)) rep.warnings.push_back("omega in {0, pi/2}: parabolic blow-up hypotheses not met");
  if (!(info.lambda.real() < 0.0)) rep.warnings.push_back("lambda is not negative");
  if (!(r.front().energy < 0.0)) rep.warnings.push_back("initial energy is not negative");
  const double s2 = std::sin(2.0 * info.omega);
  if (std::abs(s2) > 0.0 && !(info.p > 2.0 / (s2 * s2) - 1.0)) rep.warnings.push_back("p <= p0");
  return rep;
}

}  // namespace expanse
