#include "expanse/cosmology.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "expanse/scale_factor.hpp"

namespace expanse::cosmology {

namespace {

constexpr double kStaticTol = 1e-12;

bool nearly(double a, double b) { return std::abs(a - b) <= kStaticTol * std::max(std::abs(a), std::abs(b)); }

/// Integral of (sin²φ)^{1/(n−2)} or (sinh²φ)^{1/(n−2)} over [0, θ].
double theta_integral(int n, bool hyperbolic, double theta) {
  if (theta <= 0.0) return 0.0;
  const double e = 1.0 / (n - 2);
  auto f = [e, hyperbolic](double phi) {
    const double s = hyperbolic ? std::sinh(phi) : std::sin(phi);
    return std::pow(s * s, e);
  };
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, 0.0, theta, 1e-14);
}

/// Right-hand side scale c such that ∫₀^θ = c·x⁰.
double theta_rate(const CosmologyModel& m) {
  const double K = std::abs(m.curvature_ratio);
  const double e = 1.0 / (m.n - 2);
  return std::pow(K, 0.5 + e) * std::pow(m.R, -e) * (m.n - 2) / 2.0;
}

double solve_theta(const CosmologyModel& m, double x0) {
  const bool hyperbolic = m.curvature_ratio < 0.0;
  const double target = theta_rate(m) * x0;
  auto g = [&](double th) { return theta_integral(m.n, hyperbolic, th) - target; };
  double hi = hyperbolic ? 1.0 : std::numbers::pi;
  if (hyperbolic) {
    while (g(hi) < 0.0) hi *= 2.0;
  }
  std::uintmax_t iters = 200;
  auto [lo_r, hi_r] = boost::math::tools::toms748_solve(g, 0.0, hi, -target, g(hi),
                                                        boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (lo_r + hi_r);
}

double friedmann_rhs(const CosmologyModel& m, double b) {
  if (m.kind == ModelKind::EquationOfState) {
    const double e = m.n * (1.0 + m.sigma);
    return m.db0 * m.db0 * std::pow(m.b0, e - 2.0) * std::pow(b, 2.0 - e);
  }
  return m.R * std::pow(b, 2.0 - m.n) + m.L * b * b - m.curvature_ratio;
}

double friedmann_rhs_prime(const CosmologyModel& m, double b) {
  return (2.0 - m.n) * m.R * std::pow(b, 1.0 - m.n) + 2.0 * m.L * b;
}

ScaleFactor eos_scale(const CosmologyModel& m) {
  return ScaleFactor(ScaleFactorParams{m.n, m.sigma, m.b0, m.db0});
}

bool is_static_einstein(const CosmologyModel& m) {
  if (m.curvature_ratio <= 0.0) return false;
  const double Lp = printed_static_threshold(m.n, m.R, m.curvature_ratio);
  if (nearly(m.L, Lp) && nearly(m.b0, printed_static_scale(m.n, m.R, m.L))) return true;
  const double Le = double_root_threshold(m.n, m.R, m.curvature_ratio);
  return nearly(m.L, Le) && nearly(m.b0, double_root_scale(m.n, m.R, m.curvature_ratio));
}

/// True when b vanishes at x⁰ = 0 so the domain is open there.
bool starts_at_zero(const CosmologyModel& m) {
  switch (m.kind) {
    case ModelKind::NegativeLambda: return true;
    case ModelKind::DeSitter: return m.curvature_ratio < 0.0;
    case ModelKind::MatterOnly: return m.curvature_ratio != 0.0;
    default: return false;
  }
}

struct Stencil {
  double h;
};

Stencil stencil_for(const CosmologyModel& m, double x0) {
  double h = 2e-4 * (1.0 + std::abs(x0));
  const double lo = x0 - m.domain_start();
  const double hi = m.domain_end().as_double() - x0;
  h = std::min({h, lo / 200.0, hi / 200.0});
  if (!(h > 1e-8)) {
    throw DomainError("x0 = " + format_double(x0) + " is too close to the domain boundary for differencing");
  }
  return {h};
}

template <class F>
double d1(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

template <class F>
double d2(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

void require_eos(const CosmologyModel& m, const char* what) {
  if (m.kind != ModelKind::EquationOfState) {
    throw NotApplicable(std::string(what) + " applies to EquationOfState models only");
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::EquationOfState: return "EquationOfState";
    case ModelKind::MinkowskiMilne: return "MinkowskiMilne";
    case ModelKind::NegativeLambda: return "NegativeLambda";
    case ModelKind::DeSitter: return "DeSitter";
    case ModelKind::MatterOnly: return "MatterOnly";
    case ModelKind::MatterWithLambda: return "MatterWithLambda";
  }
  return "?";
}

std::string_view to_string(Fate fate) {
  switch (fate) {
    case Fate::TendsToInfinity: return "tends-to-infinity";
    case Fate::TendsToStatic: return "tends-to-static";
    case Fate::VanishesInFiniteTime: return "vanishes-in-finite-time";
    case Fate::Undetermined: return "undetermined";
  }
  return "?";
}

void CosmologyModel::validate() const {
  if (n < 3) throw DomainError("cosmology: n must be >= 3, got " + std::to_string(n));
  if (branch != 1 && branch != -1) throw DomainError("cosmology: branch must be +1 or -1");
  const double K = curvature_ratio;
  switch (kind) {
    case ModelKind::EquationOfState:
      if (!(b0 > 0.0)) throw DomainError("cosmology: b0 must be > 0");
      break;
    case ModelKind::MinkowskiMilne:
      if (K > 0.0) throw DomainError("MinkowskiMilne requires k^2/q^2 <= 0");
      if (!(b0 > 0.0)) throw DomainError("cosmology: b0 must be > 0");
      break;
    case ModelKind::NegativeLambda:
      if (!(L < 0.0)) throw DomainError("NegativeLambda requires L < 0");
      if (!(K < 0.0)) throw DomainError("NegativeLambda requires k^2/q^2 < 0 for a nontrivial b");
      break;
    case ModelKind::DeSitter:
      if (!(L > 0.0)) throw DomainError("DeSitter requires L > 0");
      if (K == 0.0 && !(b0 > 0.0)) throw DomainError("cosmology: b0 must be > 0");
      break;
    case ModelKind::MatterOnly:
      if (!(R > 0.0)) throw DomainError("MatterOnly requires R > 0");
      if (K == 0.0 && !(b0 > 0.0)) throw DomainError("cosmology: b0 must be > 0");
      break;
    case ModelKind::MatterWithLambda:
      if (!(R > 0.0) || !(L > 0.0)) throw DomainError("MatterWithLambda requires R > 0 and L > 0");
      if (!(b0 > 0.0)) throw DomainError("cosmology: b0 must be > 0");
      break;
  }
}

double CosmologyModel::domain_start() const { return 0.0; }

ExtendedReal CosmologyModel::domain_end() const {
  validate();
  switch (kind) {
    case ModelKind::EquationOfState: return eos_scale(*this).T0();
    case ModelKind::MinkowskiMilne:
      if (branch < 0 && curvature_ratio < 0.0) return ExtendedReal::finite(b0 / std::sqrt(-curvature_ratio));
      return ExtendedReal::infinity();
    case ModelKind::NegativeLambda: return ExtendedReal::finite(std::numbers::pi / std::sqrt(-L));
    case ModelKind::DeSitter: return ExtendedReal::infinity();
    case ModelKind::MatterOnly:
      if (curvature_ratio == 0.0) {
        if (branch > 0) return ExtendedReal::infinity();
        return ExtendedReal::finite(2.0 * std::pow(b0, 0.5 * n) / (n * std::sqrt(R)));
      }
      if (curvature_ratio > 0.0) {
        return ExtendedReal::finite(theta_integral(n, false, std::numbers::pi) / theta_rate(*this));
      }
      return ExtendedReal::infinity();
    case ModelKind::MatterWithLambda: return ExtendedReal::infinity();
  }
  return ExtendedReal::infinity();
}

double eval_b(const CosmologyModel& m, double x0) {
  m.validate();
  const bool open_start = starts_at_zero(m);
  if (!(open_start ? x0 > 0.0 : x0 >= 0.0) || !m.domain_end().exceeds(x0)) {
    throw DomainError("x0 = " + format_double(x0) + " outside the domain of " + std::string(to_string(m.kind)) +
                      " (end " + m.domain_end().to_string() + ")");
  }
  const double K = m.curvature_ratio;
  const double sgn = m.branch;
  switch (m.kind) {
    case ModelKind::EquationOfState: return eos_scale(m).eval_a(x0);
    case ModelKind::MinkowskiMilne: return m.b0 + sgn * std::sqrt(-K) * x0;
    case ModelKind::NegativeLambda: return std::sqrt(std::abs(K / m.L)) * std::sin(std::sqrt(-m.L) * x0);
    case ModelKind::DeSitter: {
      const double r = std::sqrt(m.L);
      if (K == 0.0) return m.b0 * std::exp(sgn * r * x0);
      if (K > 0.0) return std::sqrt(K / m.L) * std::cosh(r * x0);
      return std::sqrt(std::abs(K / m.L)) * std::sinh(r * x0);
    }
    case ModelKind::MatterOnly: {
      const double e = 1.0 / (m.n - 2);
      if (K == 0.0) return std::pow(std::pow(m.b0, 0.5 * m.n) + sgn * m.n * std::sqrt(m.R) * x0 / 2.0, 2.0 / m.n);
      const double th = solve_theta(m, x0);
      if (K > 0.0) {
        const double s = std::sin(th);
        return std::pow(m.R * s * s / K, e);
      }
      const double s = std::sinh(th);
      return std::pow(m.R * s * s / -K, e);
    }
    case ModelKind::MatterWithLambda:
      if (is_static_einstein(m)) return m.b0;
      throw UnsupportedCase("MatterWithLambda has no closed form outside the static configuration; use integrate_fate");
  }
  throw UnsupportedCase("unknown model kind");
}

double friedmann_residual(const CosmologyModel& m, double x0) {
  const auto [h] = stencil_for(m, x0);
  auto b = [&](double x) { return eval_b(m, x); };
  const double db = d1(b, x0, h);
  return std::abs(db * db - friedmann_rhs(m, b(x0)));
}

double scaled_density(const CosmologyModel& m, double x0, double sigma) {
  require_eos(m, "scaled_density");
  const double b = eval_b(m, x0);
  const double e = m.n * (1.0 + sigma);
  return 0.5 * (m.n - 1) * m.n * m.db0 * m.db0 * std::pow(m.b0, e - 2.0) * std::pow(b, -e);
}

double raychaudhuri_residual(const CosmologyModel& m, double x0, double sigma) {
  require_eos(m, "raychaudhuri_residual");
  if (m.db0 == 0.0) return 0.0;
  const auto [h] = stencil_for(m, x0);
  auto b = [&](double x) { return eval_b(m, x); };
  const double bx = b(x0);
  const double coeff = (2.0 / (m.n - 1)) * ((m.n - 2 + m.n * sigma) / (2.0 * m.n));
  return std::abs(d2(b, x0, h) / bx + coeff * scaled_density(m, x0, sigma));
}

double mass_conservation_residual(const CosmologyModel& m, double x0, double sigma) {
  require_eos(m, "mass_conservation_residual");
  if (m.db0 == 0.0) return 0.0;
  const auto [h] = stencil_for(m, x0);
  auto energy = [&](double x) { return scaled_density(m, x, sigma) * std::pow(eval_b(m, x), m.n); };
  auto volume = [&](double x) { return std::pow(eval_b(m, x), m.n); };
  return std::abs(d1(energy, x0, h) + sigma * scaled_density(m, x0, sigma) * d1(volume, x0, h));
}

double eval_kappa(int n, double G, double c) {
  if (n < 3) throw DomainError("eval_kappa: n must be >= 3, got " + std::to_string(n));
  if (!(G > 0.0) || !(c > 0.0)) throw DomainError("eval_kappa: G and c must be > 0");
  const double c4 = (c * c) * (c * c);
  if (n == 3) return 8.0 * std::numbers::pi * G / c4;
  return 2.0 * (n - 1) * std::pow(std::numbers::pi, 0.5 * n) * G / ((n - 2) * std::tgamma(0.5 * n) * c4);
}

ProfileJet eval_profile(const IsotropyProfile& p, double r) {
  using C = std::complex<double>;
  if (!(r > 0.0)) throw DomainError("isotropy profile: r must be > 0");
  if (p.q == C(0.0, 0.0)) throw DomainError("isotropy profile: q must be nonzero");
  const C k2 = p.k * p.k;
  const C D = 1.0 + k2 * r * r / 4.0;
  if (std::abs(D) < 1e-300) throw DomainError("isotropy profile: 1 + k^2 r^2 / 4 vanishes at r = " + format_double(r));
  ProfileJet j;
  j.f = std::log(p.q * p.q) - 2.0 * std::log(D);
  j.df = -k2 * r / D;
  j.d2f = -k2 / D + k2 * k2 * r * r / (2.0 * D * D);
  return j;
}

double isotropy_residual(const IsotropyProfile& p, double r) {
  const auto j = eval_profile(p, r);
  return std::abs(j.d2f - j.df / r - j.df * j.df / 2.0);
}

double printed_static_threshold(int n, double R, double K) {
  return std::pow(K / 2.0, static_cast<double>(n) / (n - 2)) * std::pow(R, -2.0 / (n - 2));
}

double printed_static_scale(int n, double R, double L) { return std::pow(R / L, 1.0 / n); }

double double_root_scale(int n, double R, double K) { return std::pow(n * R / (2.0 * K), 1.0 / (n - 2)); }

double double_root_threshold(int n, double R, double K) {
  return 0.5 * (n - 2) * R * std::pow(2.0 * K / (n * R), static_cast<double>(n) / (n - 2));
}

FateReport integrate_fate(const CosmologyModel& m) {
  m.validate();
  if (m.kind != ModelKind::MatterWithLambda) throw NotApplicable("integrate_fate applies to MatterWithLambda models");
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;

  const double F0 = friedmann_rhs(m, m.b0);
  const double scale0 = m.R * std::pow(m.b0, 2.0 - m.n) + m.L * m.b0 * m.b0 + std::abs(m.curvature_ratio);
  if (F0 < -1e-12 * scale0) {
    throw DomainError("b0 = " + format_double(m.b0) + " lies where (d b)^2 would be negative");
  }
  State y{m.b0, m.branch * std::sqrt(std::max(F0, 0.0))};
  auto rhs = [&m](const State& s, State& ds, double) {
    ds[0] = s[1];
    ds[1] = 0.5 * friedmann_rhs_prime(m, s[0]);
  };

  const double tau = 1.0 / std::sqrt(m.L);
  const double x_max = 1e3 * tau;
  const bool has_static = m.curvature_ratio > 0.0;
  const double bE = has_static ? double_root_scale(m.n, m.R, m.curvature_ratio) : 0.0;
  const double b_big = 1e6 * std::max(m.b0, bE);
  const double b_small = 1e-6 * m.b0;

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-12, 1e-12);
  double x = 0.0;
  double dx = 1e-3 * tau;
  FateReport rep;
  auto finish = [&](Fate f) {
    rep.fate = f;
    rep.x_end = x;
    rep.b_end = y[0];
    return rep;
  };
  for (long iter = 0; iter < 10'000'000 && x < x_max; ++iter) {
    if (has_static && std::abs(y[0] - bE) < 1e-3 * bE && std::abs(y[1]) < 1e-2 * std::sqrt(m.L) * bE) {
      return finish(Fate::TendsToStatic);
    }
    if (y[0] > b_big) return finish(Fate::TendsToInfinity);
    if (y[0] < b_small) return finish(Fate::VanishesInFiniteTime);
    if (stepper.try_step(rhs, y, x, dx) == odeint::fail) {
      if (dx < 1e-15 * std::max(x, tau)) {
        return finish(y[0] < 1e-3 * m.b0 ? Fate::VanishesInFiniteTime : Fate::Undetermined);
      }
    }
  }
  return finish(Fate::Undetermined);
}

const std::vector<CatalogueEntry>& model_catalogue() {
  static const std::vector<CatalogueEntry> catalogue = [] {
    using K = ModelKind;
    auto eos = [](int n, double sigma, double b0, double db0) {
      CosmologyModel m;
      m.kind = K::EquationOfState;
      m.n = n;
      m.sigma = sigma;
      m.b0 = b0;
      m.db0 = db0;
      return m;
    };
    auto model = [](K kind, int n, double R, double L, double Kc, double b0, int branch) {
      CosmologyModel m;
      m.kind = kind;
      m.n = n;
      m.R = R;
      m.L = L;
      m.curvature_ratio = Kc;
      m.b0 = b0;
      m.branch = branch;
      return m;
    };
    const double Lstatic = printed_static_threshold(3, 1.0, 1.0);
    std::vector<CatalogueEntry> c{
        {"eos-dust", eos(3, 0.0, 1.0, 1.0), 0.1, 5.0},
        {"eos-radiation", eos(3, 1.0 / 3.0, 1.0, 1.0), 0.1, 5.0},
        {"eos-vacuum", eos(3, -1.0, 1.0, 0.5), 0.1, 5.0},
        {"eos-stiff-contracting", eos(3, 1.0, 1.0, -0.5), 0.05, 0.6},
        {"eos-dust-4d", eos(4, 0.0, 1.0, 1.0), 0.1, 5.0},
        {"minkowski", model(K::MinkowskiMilne, 3, 0, 0, 0.0, 1.0, 1), 0.1, 5.0},
        {"milne", model(K::MinkowskiMilne, 3, 0, 0, -1.0, 1.0, 1), 0.1, 5.0},
        {"milne-contracting", model(K::MinkowskiMilne, 3, 0, 0, -1.0, 2.0, -1), 0.1, 1.8},
        {"anti-de-sitter-open", model(K::NegativeLambda, 3, 0, -1.0, -1.0, 1.0, 1), 0.1, 3.0},
        {"de-sitter-flat", model(K::DeSitter, 3, 0, 1.0, 0.0, 1.0, 1), 0.1, 5.0},
        {"de-sitter-flat-contracting", model(K::DeSitter, 3, 0, 1.0, 0.0, 1.0, -1), 0.1, 5.0},
        {"de-sitter-closed", model(K::DeSitter, 3, 0, 1.0, 1.0, 1.0, 1), 0.1, 5.0},
        {"de-sitter-open", model(K::DeSitter, 3, 0, 1.0, -1.0, 1.0, 1), 0.1, 5.0},
        {"einstein-de-sitter", model(K::MatterOnly, 3, 1.0, 0, 0.0, 1.0, 1), 0.1, 5.0},
        {"einstein-de-sitter-contracting", model(K::MatterOnly, 3, 1.0, 0, 0.0, 1.0, -1), 0.05, 0.6},
        {"friedmann-closed", model(K::MatterOnly, 3, 1.0, 0, 1.0, 1.0, 1), 0.1, 3.0},
        {"friedmann-open", model(K::MatterOnly, 3, 1.0, 0, -1.0, 1.0, 1), 0.1, 5.0},
        {"friedmann-closed-4d", model(K::MatterOnly, 4, 1.0, 0, 1.0, 1.0, 1), 0.1, 1.9},
        {"friedmann-open-5d", model(K::MatterOnly, 5, 1.0, 0, -1.0, 1.0, 1), 0.1, 5.0},
        {"einstein-static", model(K::MatterWithLambda, 3, 1.0, Lstatic, 1.0, printed_static_scale(3, 1.0, Lstatic), 1),
         0.1, 5.0},
    };
    return c;
  }();
  return catalogue;
}

const CatalogueEntry& find_model(std::string_view name) {
  std::string known;
  for (const auto& e : model_catalogue()) {
    if (e.name == name) return e;
    known += (known.empty() ? "" : ", ") + e.name;
  }
  throw std::out_of_range("unknown cosmology model '" + std::string(name) + "'; known: " + known);
}

}  // namespace expanse::cosmology
