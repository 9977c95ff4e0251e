// Acceptance gate: one PASS/FAIL line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expanse/classifier.hpp"
#include "expanse/config.hpp"
#include "expanse/cosmology.hpp"
#include "expanse/diagnostics.hpp"
#include "expanse/initial_conditions.hpp"
#include "expanse/runner.hpp"
#include "expanse/scale_factor.hpp"
#include "expanse/solver.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

GridSpec line_grid(std::size_t n, double length) {
  GridSpec g;
  g.dim = 1;
  g.points = n;
  g.length = length;
  return g;
}

SolverConfig base_config(double omega, double lambda, double p, ScaleFactorParams bg, double step) {
  SolverConfig c;
  c.sign = +1;
  c.omega = omega;
  c.lambda = Complex(lambda, 0.0);
  c.p = p;
  c.background = bg;
  c.step = step;
  return c;
}

Trajectory run_tracked(const SolverConfig& cfg, const GridSpec& g, const Field& u0, double s_end,
                       EvolveSummary* summary = nullptr, double K0 = 1.0) {
  SplitStepSolver solver(cfg, g);
  DiagnosticsTracker tracker(solver, K0);
  auto sum = solver.evolve(u0, s_end, tracker.observer());
  if (summary) *summary = std::move(sum);
  return tracker.take();
}

Field gaussian_on(const GridSpec& g, double amplitude, double width, double ramp = 0.0) {
  SpectralGrid sg(g);
  return gaussian(sg, width, amplitude, ramp);
}

// 1. Background closed forms against quadrature.
Outcome criterion1() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_s = 0.0, worst_S0 = 0.0;
  int finite_S0 = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    ScaleFactorParams p;
    p.n = 1 + static_cast<int>(U(rng) * 5.0);
    p.sigma = draw % 7 == 0 ? -1.0 : -2.0 + 4.0 * U(rng);
    p.a0 = 0.5 + 1.5 * U(rng);
    p.a1 = draw % 11 == 0 ? 0.0 : -1.0 + 2.0 * U(rng);
    ScaleFactor sf(p);
    const double T0 = oracle::time_horizon(p);
    const double t = U(rng) * (std::isfinite(T0) ? 0.95 * T0 : 10.0);
    const double ref = oracle::s_of_t(p, t);
    const double got = sf.time_to_s(t);
    if (ref > 0.0) worst_s = std::max(worst_s, std::abs(got - ref) / ref);
    if (sf.S0().is_finite()) {
      ++finite_S0;
      const double lim = oracle::s_horizon(p);
      worst_S0 = std::max(worst_S0, std::abs(sf.S0().value() - lim) / lim);
    }
  }
  return {worst_s <= 1e-10 && worst_S0 <= 1e-6,
          "max rel err s(t) " + fmt(worst_s) + ", S0 " + fmt(worst_S0) + " over " + std::to_string(finite_S0) +
              " finite horizons"};
}

// 2. Exact Gaussian solutions of the linear flow.
Outcome criterion2() {
  double worst = 0.0;
  const GridSpec g = line_grid(256, 32.0);
  SpectralGrid sg(g);
  for (double omega : {0.0, std::numbers::pi / 4}) {
    auto cfg = base_config(omega, 0.0, 3.0, {1, 0.0, 1.0, 0.0}, 1e-2);
    SplitStepSolver solver(cfg, g);
    const double width = 1.0;
    const Field u0 = gaussian(sg, width, 1.0, 0.0);
    const auto sum = solver.evolve(u0, 1.0, {});
    const Complex kappa = Complex(0.0, cfg.diffusivity()) * std::exp(Complex(0.0, -2.0 * omega));
    const Field exact = oracle::heat_kernel_gaussian(sg.axis(0), 1.0, width * width / 2.0, kappa, sum.s_final);
    worst = std::max(worst, oracle::l2_distance(sum.final_u, exact, g.cell_volume()));
  }
  return {worst <= 1e-8, "max L2 error " + fmt(worst)};
}

double max_rel_charge_residual(const Trajectory& tr) {
  double m = 0.0;
  const double c0 = tr.records.front().charge;
  for (const auto& r : tr.records) m = std::max(m, std::abs(r.charge_residual) / c0);
  return m;
}

// 3. Charge identity.
Outcome criterion3() {
  const GridSpec g = line_grid(256, 32.0);
  const Field u0 = gaussian_on(g, 1.0, 1.0, 0.5);
  const ScaleFactorParams bg{1, 0.0, 1.0, 0.1};
  auto cfg0 = base_config(0.0, 1.0, 3.0, bg, 1e-3);
  const auto tr0 = run_tracked(cfg0, g, u0, 1.0);
  double drift = 0.0;
  for (const auto& r : tr0.records) drift = std::max(drift, std::abs(r.charge - tr0.records[0].charge) / tr0.records[0].charge);
  const std::size_t steps = tr0.records.size() - 1;

  const double om = std::numbers::pi / 4;
  const auto trA = run_tracked(base_config(om, 1.0, 3.0, bg, 2e-3), g, u0, 1.0);
  const auto trB = run_tracked(base_config(om, 1.0, 3.0, bg, 1e-3), g, u0, 1.0);
  const double rA = max_rel_charge_residual(trA);
  const double rB = max_rel_charge_residual(trB);
  const double order = std::log2(rA / rB);
  return {drift <= 1e-8 && steps >= 1000 && rB <= 1e-5 && order >= 1.0,
          "omega=0 drift " + fmt(drift) + " over " + std::to_string(steps) + " steps; omega=pi/4 residual " + fmt(rB) +
              ", halving order " + fmt(order)};
}

// 4. Energy identity and the monotonicity of E.
Outcome criterion4() {
  const GridSpec g = line_grid(256, 32.0);
  const Field u0 = gaussian_on(g, 1.0, 1.0, 0.5);
  const double om = std::numbers::pi / 4;
  const auto tr = run_tracked(base_config(om, 1.0, 3.0, {1, 0.0, 1.0, 0.1}, 1e-3), g, u0, 1.0);
  const double E0 = tr.records.front().energy;
  double worst = 0.0;
  for (const auto& r : tr.records) worst = std::max(worst, std::abs(r.energy_residual));

  // λa₁(p−1−4/n) ≥ 0 and sign·sin2ω ≥ 0 in each of these.
  struct Case {
    double omega, lambda, p, a1;
  };
  const std::vector<Case> cases{{om, 1.0, 3.0, 0.0}, {om, 1.0, 3.0, -0.1}, {om, -1.0, 3.0, 0.1}, {0.0, 1.0, 3.0, -0.1},
                                {std::numbers::pi / 8, 1.0, 3.0, -0.2}};
  double worst_rise = 0.0;
  for (const auto& c : cases) {
    const Field v0 = gaussian_on(g, c.lambda > 0 ? 1.0 : 0.5, 1.0, 0.5);
    const auto t = run_tracked(base_config(c.omega, c.lambda, c.p, {1, 0.0, 1.0, c.a1}, 1e-3), g, v0, 1.0);
    const double scale = std::abs(t.records.front().energy);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      worst_rise = std::max(worst_rise, (t.records[i].energy - t.records[i - 1].energy) / scale);
    }
  }
  return {worst <= 1e-5 * std::abs(E0) && worst_rise <= 1e-10,
          "residual " + fmt(worst) + " vs 1e-5|E0| = " + fmt(1e-5 * std::abs(E0)) + "; largest relative rise of E " +
              fmt(worst_rise)};
}

// 5. Parabolic blow-up and the concavity certificate.
Outcome criterion5() {
  const GridSpec g = line_grid(256, 32.0);
  const Field u0 = gaussian_on(g, 2.0, 1.0);
  EvolveSummary sum;
  const auto tr = run_tracked(base_config(std::numbers::pi / 4, -1.0, 3.0, {1, 0.0, 1.0, 0.0}, 1e-4), g, u0, 5.0, &sum);
  const double E0 = tr.records.front().energy;
  if (sum.status != RunStatus::BlownUp) return {false, "no blow-up detected, status " + std::string(to_string(sum.status))};
  const double s_detect = sum.blowup_hi;
  for (int i = 0; i <= 16; ++i) {
    const double K0 = std::pow(10.0, -2.0 + 0.5 * i);
    for (int j = 0; j <= 8; ++j) {
      const double alpha = std::pow(10.0, -4.0 + 0.5 * j);
      const auto rep = concavity_watch(tr, K0, alpha);
      if (rep.positive_everywhere && s_detect <= rep.S1) {
        return {E0 < 0.0, "E(0) = " + fmt(E0) + ", blow-up in [" + fmt(sum.blowup_lo) + ", " + fmt(sum.blowup_hi) +
                              "], certificate positive for K0=" + fmt(K0) + ", alpha=" + fmt(alpha) + ", S1=" + fmt(rep.S1)};
      }
    }
  }
  return {false, "blow-up at " + fmt(s_detect) + " but no (K0, alpha) on the grid gives a positive certificate with s <= S1"};
}

// 6. Virial bound for the L²-critical focusing flow.
Outcome criterion6() {
  const GridSpec g = line_grid(1024, 20.0);
  SpectralGrid sg(g);
  const Field u0 = gaussian(sg, 1.0, 2.0, 0.0);
  auto cfg = base_config(0.0, -1.0, 5.0, {1, 0.0, 1.0, 0.0}, 1e-5);
  double amp0 = 0.0;
  for (const auto& z : u0) amp0 = std::max(amp0, std::abs(z));
  // Stop once the collapse outruns the grid; |∇u| has passed 10x by then.
  cfg.safeguards.amp_threshold = 4.0 * amp0;
  EvolveSummary sum;
  const auto tr = run_tracked(cfg, g, u0, 1.0, &sum);
  const auto& r0 = tr.records.front();
  const double B = cfg.hbar * cfg.hbar * 1 * (cfg.p - 1.0) * r0.energy / (cfg.mass * cfg.mass);
  if (!(B < 0.0)) return {false, "E(0) is not negative"};
  // Zero of V₂(0) + V₂'(0)s + Bs²/2.
  const double a = 0.5 * B, b = r0.virial_rate, c = r0.virial2;
  const double s_star = (-b - std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  const auto pts = virial_watch(tr);
  double worst = -1e300;
  for (const auto& v : pts) worst = std::max(worst, v.d2v2 - B);
  const double tol = 1e-3 * std::abs(B);
  const double g0 = std::sqrt(r0.grad_sq);
  double s_growth = -1.0;
  for (const auto& r : tr.records) {
    if (std::sqrt(r.grad_sq) > 10.0 * g0) {
      s_growth = r.s;
      break;
    }
  }
  return {worst <= tol && s_growth > 0.0 && s_growth < s_star,
          "max(d2V2 - bound) " + fmt(worst) + " (tol " + fmt(tol) + ") over " + std::to_string(pts.size()) +
              " records; |grad u| > 10x at s=" + fmt(s_growth) + ", V2 zero bound " + fmt(s_star)};
}

// 7. Global runs stay below the a-priori gradient bounds.
Outcome criterion7() {
  const GridSpec g = line_grid(256, 32.0);
  const ScaleFactorParams bg{1, 0.0, 1.0, 0.0};
  const double S0 = ScaleFactor(bg).S0().as_double();
  const double s_end = std::min(5.0, 0.9 * S0);
  std::ostringstream detail;
  bool ok = true;
  for (double lambda : {1.0, -1.0}) {
    EvolveSummary sum;
    const Field u0 = gaussian_on(g, 1.0, 1.0, 0.5);
    const auto tr = run_tracked(base_config(0.0, lambda, 3.0, bg, 1e-3), g, u0, s_end, &sum);
    const auto& r0 = tr.records.front();
    double bound;
    if (lambda > 0) {
      bound = 2.0 * r0.energy * (1.0 + 1e-6);
    } else {
      // ‖u‖₄⁴ ≤ ‖u‖₂³‖∂ₓu‖₂ turns E into a quadratic bound on ‖∂ₓu‖₂.
      const double E = r0.energy + 1e-6 * std::abs(r0.energy);
      const double bq = std::pow(r0.mass, 1.5) / 2.0;
      const double y = 0.5 * (bq + std::sqrt(bq * bq + 8.0 * E));
      bound = y * y;
    }
    double gmax = 0.0;
    for (const auto& r : tr.records) gmax = std::max(gmax, r.grad_sq);
    const bool reached = std::abs(sum.s_final - s_end) <= 1e-12 * s_end && sum.status != RunStatus::BlownUp;
    ok = ok && reached && gmax <= bound;
    detail << (lambda > 0 ? "defocusing" : "focusing") << ": s=" << fmt(sum.s_final) << " max|grad u|^2 " << fmt(gmax)
           << " <= " << fmt(bound) << "; ";
  }
  return {ok, detail.str()};
}

// 8. A closed forms and the soundness of the verdicts.
Outcome criterion8() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto draw = [&](classifier::ProblemSpec& s) {
    s.background.n = 1 + static_cast<int>(U(rng) * 5.0);
    const double n = s.background.n;
    const double r = U(rng);
    s.mu0 = r < 0.3 ? 0.0 : (r < 0.5 && n > 2 ? 1.0 : U(rng) * 0.999 * n / 2.0);
    const double r2 = U(rng);
    s.background.sigma = r2 < 0.2 ? -1.0 : -2.0 + 4.0 * U(rng);
    s.background.a0 = 0.5 + 1.5 * U(rng);
    s.background.a1 = U(rng) < 0.1 ? 0.0 : -1.0 + 2.0 * U(rng);
    const double pc = 1.0 + 4.0 / (n - 2.0 * s.mu0);
    const double r3 = U(rng);
    if (r3 < 0.15) {
      s.p = pc;
    } else if (r3 < 0.25 && s.mu0 > 0 && s.background.sigma != -1.0) {
      const double p1 = 1.0 + 4.0 / (n - 2.0 * s.mu0) /
                                  (1.0 + 4.0 / (n - 2.0 * s.mu0) * 2.0 * s.mu0 / (n * (1.0 + s.background.sigma)));
      s.p = p1 >= 1.0 && p1 <= pc ? p1 : 1.0 + (pc - 1.0) * U(rng);
    } else {
      s.p = 1.0 + (pc - 1.0) * U(rng);
    }
    s.lambda = {1.0, 0.0};
  };

  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    classifier::ProblemSpec s;
    draw(s);
    const double T0 = oracle::time_horizon(s.background);
    const double T = (0.05 + 0.9 * U(rng)) * (std::isfinite(T0) ? T0 : 5.0);
    const double ref = oracle::A_norm(s.background, s.p, s.mu0, T);
    const double got = classifier::eval_A(s, ExtendedReal::finite(T), classifier::Window::T).value();
    const double gotS =
        classifier::eval_A(s, ExtendedReal::finite(ScaleFactor(s.background).time_to_s(T)), classifier::Window::S).value();
    worst = std::max({worst, std::abs(got - ref) / ref, std::abs(gotS - ref) / ref});
  }

  int mismatches = 0, checked = 0;
  for (int i = 0; checked < 1000; ++i) {
    classifier::ProblemSpec s;
    draw(s);
    const bool odd = std::abs(s.p - std::round(s.p)) < 1e-12 && static_cast<long>(std::round(s.p)) % 2 == 1;
    if (s.p <= 1.0 + 1e-12 || (!odd && s.mu0 >= s.p)) continue;
    ++checked;
    const auto v = classifier::theorem1_verdict(s);
    const bool finite = classifier::eval_A(s, classifier::thresholds(s).T0, classifier::Window::T).is_finite();
    if (finite != v.small_data_global()) ++mismatches;
  }
  return {worst <= 1e-8 && mismatches == 0,
          "max rel err " + fmt(worst) + " over 500 specs; " + std::to_string(mismatches) + " mismatches in " +
              std::to_string(checked) + " sweep points"};
}

// 9. Cosmology residuals.
Outcome criterion9() {
  using namespace cosmology;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& e : model_catalogue()) {
    for (int i = 1; i <= 100; ++i) {
      const double x = e.sample_lo + (e.sample_hi - e.sample_lo) * i / 101.0;
      double r = friedmann_residual(e.model, x);
      if (e.model.kind == ModelKind::EquationOfState) {
        r = std::max({r, raychaudhuri_residual(e.model, x, e.model.sigma),
                      mass_conservation_residual(e.model, x, e.model.sigma)});
      }
      if (r > worst) {
        worst = r;
        worst_name = e.name;
      }
    }
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double worst_iso = 0.0;
  for (int i = 0; i < 1000;) {
    IsotropyProfile prof{{U(rng), U(rng)}, {U(rng), U(rng)}};
    const double r = 0.1 + std::abs(U(rng));
    if (std::abs(prof.q) < 0.1 || std::abs(1.0 + prof.k * prof.k * r * r / 4.0) < 0.1) continue;
    ++i;
    worst_iso = std::max(worst_iso, isotropy_residual(prof, r));
  }
  return {worst <= 1e-6 && worst_iso <= 1e-8, "max catalogue residual " + fmt(worst) + " (" + worst_name +
                                                  "), max isotropy residual " + fmt(worst_iso)};
}

// 10. Strang self-convergence and determinism.
Outcome criterion10() {
  const GridSpec g = line_grid(256, 32.0);
  const Field u0 = gaussian_on(g, 1.0, 1.0, 0.5);
  std::vector<Field> sols;
  for (double dt : {0.02, 0.01, 0.005}) {
    SplitStepSolver solver(base_config(std::numbers::pi / 8, 1.0, 3.0, {1, 0.0, 1.0, 0.2}, dt), g);
    sols.push_back(solver.evolve(u0, 1.0, {}).final_u);
  }
  const double h = g.cell_volume();
  const double order = std::log2(oracle::l2_distance(sols[0], sols[1], h) / oracle::l2_distance(sols[1], sols[2], h));

  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "expanse_acceptance_determinism";
  fs::remove_all(root);
  const std::string cfg =
      "[scenario]\nname = det\ns_end = 0.5\nstep = 1e-3\n[spec]\nn = 1\np = 3\nlambda = 1\nomega = pi/8\na1 = 0.2\n"
      "[grid]\npoints = 128\nlength = 20\n[initial]\nkind = random-band-limited\nseed = 11\ncutoff = 6\n";
  auto read = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  std::string a, b;
  for (const char* sub : {"a", "b"}) {
    RunOptions opts;
    opts.out_dir = (root / sub).string();
    run_scenario(scenario_from_table(parse_config_text(cfg), "det"), opts);
    (std::string(sub) == "a" ? a : b) = read(root / sub / "det" / "records.csv");
  }
  fs::remove_all(root);
  const bool same = !a.empty() && a == b;
  return {order >= 1.9 && order <= 2.1 && same,
          "measured order " + fmt(order) + "; repeated records " + (same ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"background closed forms", criterion1},   {"exact Gaussian regression", criterion2},
      {"charge identity", criterion3},           {"energy identity", criterion4},
      {"parabolic blow-up", criterion5},         {"virial bound", criterion6},
      {"global regimes", criterion7},            {"A closed forms and verdicts", criterion8},
      {"cosmology residuals", criterion9},       {"Strang order and determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
