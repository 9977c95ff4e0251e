#include "expanse/classifier.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "expanse/errors.hpp"

namespace expanse::classifier {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

bool approx(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool is_odd_integer(double p) { return std::floor(p) == p && std::fmod(p, 2.0) == 1.0; }

bool dispersive(double omega) { return std::abs(omega) < 1e-15 || approx(omega, kHalfPi); }

ExtendedReal ext(double v) { return std::isinf(v) ? ExtendedReal::infinity() : ExtendedReal::finite(std::max(v, 0.0)); }

/// U^e for U ∈ [0, ∞].
double pow_ext(double U, double e) {
  if (e == 0.0) return 1.0;
  if (std::isinf(U)) return e > 0.0 ? kInf : 0.0;
  if (U == 0.0) return e < 0.0 ? kInf : 0.0;
  return std::pow(U, e);
}

std::string fmt(double v) { return format_double(v); }

Hypothesis hyp(std::string text, bool ok) {
  return {std::move(text), ok ? HypothesisStatus::Satisfied : HypothesisStatus::Violated};
}

CorollaryOutcome outcome_of(const std::vector<Hypothesis>& hs) {
  bool unknown = false;
  for (const auto& h : hs) {
    if (h.status == HypothesisStatus::Violated) return CorollaryOutcome::NotApplicable;
    if (h.status == HypothesisStatus::Unverifiable) unknown = true;
  }
  return unknown ? CorollaryOutcome::Undetermined : CorollaryOutcome::Applies;
}

Hypothesis energy_hyp(EnergySign e) {
  const std::string text = "E(u0) < 0";
  if (e == EnergySign::Unknown) return {text, HypothesisStatus::Unverifiable};
  return hyp(text, e == EnergySign::Negative);
}

}  // namespace

void ProblemSpec::validate() const {
  background.validate();
  if (sign != 1 && sign != -1) throw InvalidConfig("sign must be +1 or -1");
  if (!(omega > -kHalfPi && omega <= kHalfPi)) throw InvalidConfig("omega must lie in (-pi/2, pi/2]");
  const double so = sign * omega;
  if (!(so >= 0.0 && so <= kHalfPi)) {
    throw InvalidConfig("sign/omega incompatible: need 0 <= sign*omega <= pi/2");
  }
  if (!(mu0 >= 0.0 && mu0 < 0.5 * background.n)) {
    throw InvalidConfig("mu0 must satisfy 0 <= mu0 < n/2, got mu0=" + fmt(mu0) + " n=" + std::to_string(background.n));
  }
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidConfig("p must be >= 1");
}

Thresholds thresholds(const ProblemSpec& spec) {
  spec.validate();
  const auto& bg = spec.background;
  const double n = bg.n;
  const double gap = n - 2.0 * spec.mu0;
  Thresholds t;
  t.p_crit = 1.0 + 4.0 / gap;
  if (bg.sigma != -1.0) {
    const double inner = 1.0 + (4.0 / gap) * 2.0 * spec.mu0 / (n * (1.0 + bg.sigma));
    t.p1_crit = 1.0 + (4.0 / gap) / inner;
  }
  const double s2 = std::sin(2.0 * spec.omega);
  if (std::abs(s2) >= 1e-15) t.p0_crit = ExtendedReal::finite(2.0 / (s2 * s2) - 1.0);
  if (approx(spec.p, t.p_crit)) {
    t.q_mu0 = ExtendedReal::infinity();
  } else {
    const double inv_q = 1.0 - (spec.p - 1.0) * gap / 4.0;
    if (inv_q > 0.0) t.q_mu0 = ExtendedReal::finite(1.0 / inv_q);
  }
  t.T0 = horizon_T0(bg);
  t.S0 = horizon_S0(bg);
  // The log branch of s(t) has no finite horizon.
  if (bg.sigma != -1.0 && std::abs(4.0 / (n * (1.0 + bg.sigma)) - 1.0) < 1e-12) t.S0 = ExtendedReal::infinity();
  return t;
}

std::string Theorem1Verdict::summary() const {
  if (!local_wellposed) return "not covered: " + reason;
  if (fired.empty()) return "local only";
  std::string s = "small-data global via ";
  for (std::size_t i = 0; i < fired.size(); ++i) s += (i ? ", " : "") + fired[i];
  return s;
}

Theorem1Verdict theorem1_verdict(const ProblemSpec& spec) {
  const auto t = thresholds(spec);
  const auto& bg = spec.background;
  Theorem1Verdict v;
  const double p = spec.p;
  const bool eq = approx(p, t.p_crit);
  if (p > t.p_crit && !eq) {
    v.reason = "p = " + fmt(p) + " exceeds p(mu0) = " + fmt(t.p_crit);
    return v;
  }
  if (!is_odd_integer(p) && !(spec.mu0 < p)) {
    v.reason = "mu0 < p is required when p is not an odd integer";
    return v;
  }
  v.local_wellposed = true;
  const bool lt = !eq;
  const double a1 = bg.a1;
  const double sg = bg.sigma;
  const bool mu_pos = spec.mu0 > 0.0;
  if (!mu_pos && eq) v.fired.emplace_back("(i)");
  if (mu_pos && eq && a1 >= 0.0) v.fired.emplace_back("(ii)");
  if (p > 1.0 && lt && a1 > 0.0 && sg < -1.0) v.fired.emplace_back("(iii)");
  if (t.p1_crit) {
    const double p1 = *t.p1_crit;
    const bool at_p1 = approx(p, p1);
    if (p > 1.0 && p < p1 && !at_p1 && a1 < 0.0 && sg > -1.0) v.fired.emplace_back("(iv)");
    if (p > p1 && !at_p1 && lt && a1 > 0.0 && sg > -1.0) v.fired.emplace_back("(v)");
  }
  if (mu_pos && p > 1.0 && lt && a1 > 0.0 && sg == -1.0) v.fired.emplace_back("(vi)");
  return v;
}

std::string_view to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::Satisfied: return "satisfied";
    case HypothesisStatus::Violated: return "violated";
    case HypothesisStatus::Unverifiable: return "unverifiable";
  }
  return "?";
}

std::string_view to_string(CorollaryOutcome o) {
  switch (o) {
    case CorollaryOutcome::Applies: return "applies";
    case CorollaryOutcome::NotApplicable: return "not-applicable";
    case CorollaryOutcome::Undetermined: return "undetermined";
  }
  return "?";
}

std::string_view to_string(EnergySign e) {
  switch (e) {
    case EnergySign::Negative: return "negative";
    case EnergySign::Zero: return "zero";
    case EnergySign::Positive: return "positive";
    case EnergySign::Unknown: return "unknown";
  }
  return "?";
}

std::vector<CorollaryVerdict> corollary_verdict(const ProblemSpec& spec, EnergySign energy_sign,
                                                bool has_weighted_L2) {
  const auto t = thresholds(spec);
  const auto& bg = spec.background;
  const double n = bg.n;
  const double p = spec.p;
  const double lam = spec.lambda.real();
  const double a1 = bg.a1;
  const double mu0 = spec.mu0;
  const double p_mass = 1.0 + 4.0 / n;
  const double p_energy = n > 2.0 ? 1.0 + 4.0 / (n - 2.0) : kInf;
  const bool le_energy = p < p_energy || approx(p, p_energy);
  const bool ge_mass = p > p_mass || approx(p, p_mass);
  const bool lt_mass = p < p_mass && !approx(p, p_mass);
  const bool mu1 = mu0 == 1.0;
  const bool s0_inf = t.S0.is_infinite();

  std::vector<CorollaryVerdict> out(4);
  out[0].number = 1;
  out[0].claim = "global";
  out[1].number = 2;
  out[1].claim = "global";
  out[2].number = 3;
  out[2].claim = "blow-up";
  out[3].number = 4;
  out[3].claim = "blow-up";

  if (spec.lambda.imag() != 0.0) {
    for (auto& c : out) {
      c.hypotheses.push_back(hyp("lambda real", false));
      c.outcome = CorollaryOutcome::NotApplicable;
    }
    return out;
  }

  auto& c1 = out[0].hypotheses;
  c1.push_back(hyp("mu0 = 0 or mu0 = 1", mu0 == 0.0 || mu1));
  c1.push_back(hyp("lambda > 0", lam > 0.0));
  if (mu1) {
    c1.push_back(hyp("1 <= p < 1+4/(n-2)", p >= 1.0 && p < p_energy && !approx(p, p_energy)));
    c1.push_back(hyp("a1(p-1-4/n) >= 0", a1 * (p - 1.0 - 4.0 / n) >= 0.0));
  } else {
    c1.push_back(hyp("1 <= p < 1+4/n", p >= 1.0 && lt_mass));
  }

  auto& c2 = out[1].hypotheses;
  c2.push_back(hyp("mu0 = 1", mu1));
  c2.push_back(hyp("lambda < 0", lam < 0.0));
  c2.push_back(hyp("a1 >= 0", a1 >= 0.0));
  c2.push_back(hyp("1 <= p < 1+4/n", p >= 1.0 && lt_mass));
  c2.push_back(hyp("omega = 0 or omega = pi/2", dispersive(spec.omega)));

  auto& c3 = out[2].hypotheses;
  c3.push_back(hyp("mu0 = 1", mu1));
  c3.push_back(hyp("lambda < 0", lam < 0.0));
  c3.push_back(hyp("omega != 0, pi/2", !dispersive(spec.omega)));
  const bool above_p0 = t.p0_crit.is_finite() && p > t.p0_crit.value() && !approx(p, t.p0_crit.value());
  c3.push_back(hyp("p0 < p <= 1+4/(n-2) (p0 = " + t.p0_crit.to_string() + ")", above_p0 && le_energy));
  c3.push_back(hyp("a1(p-1-4/n) <= 0", a1 * (p - 1.0 - 4.0 / n) <= 0.0));
  c3.push_back(hyp("S0 = inf", s0_inf));
  c3.push_back(energy_hyp(energy_sign));

  auto& c4 = out[3].hypotheses;
  c4.push_back(hyp("mu0 = 1", mu1));
  c4.push_back(hyp("lambda < 0", lam < 0.0));
  c4.push_back(hyp("omega = 0 or omega = pi/2", dispersive(spec.omega)));
  c4.push_back(hyp("1+4/n <= p <= 1+4/(n-2)", ge_mass && le_energy));
  c4.push_back(hyp("a1 <= 0", a1 <= 0.0));
  c4.push_back(hyp("S0 = inf", s0_inf));
  c4.push_back(hyp("|||x| u0||_2 < inf", has_weighted_L2));
  c4.push_back(energy_hyp(energy_sign));

  for (auto& c : out) c.outcome = outcome_of(c.hypotheses);
  return out;
}

ExtendedReal eval_A(const ProblemSpec& spec, const ExtendedReal& horizon, Window window) {
  const auto t = thresholds(spec);
  const auto& bg = spec.background;
  if (!t.q_mu0) throw DomainError("eval_A: p = " + fmt(spec.p) + " exceeds p(mu0) = " + fmt(t.p_crit));

  // Translate the window into a t-horizon T; at_end marks T = T₀ < ∞.
  double T = 0.0;
  bool at_end = false;
  if (window == Window::S) {
    if (horizon.is_infinite()) {
      if (t.S0.is_finite()) throw DomainError("eval_A: infinite s-window but S0 = " + t.S0.to_string());
      T = t.T0.as_double();
      at_end = t.T0.is_finite();
    } else {
      const double S = horizon.value();
      if (!(S >= 0.0)) throw DomainError("eval_A: window must be >= 0");
      if (t.S0.is_finite() && S > t.S0.value()) throw DomainError("eval_A: S exceeds S0 = " + t.S0.to_string());
      if (t.S0.is_finite() && S == t.S0.value()) {
        T = t.T0.as_double();
        at_end = t.T0.is_finite();
      } else {
        T = ScaleFactor(bg).s_to_time(S);
      }
    }
  } else {
    if (horizon.is_infinite()) {
      if (t.T0.is_finite()) throw DomainError("eval_A: infinite t-window but T0 = " + t.T0.to_string());
      T = kInf;
    } else {
      T = horizon.value();
      if (!(T >= 0.0)) throw DomainError("eval_A: window must be >= 0");
      if (t.T0.is_finite() && T > t.T0.value()) throw DomainError("eval_A: T exceeds T0 = " + t.T0.to_string());
      at_end = t.T0.is_finite() && T == t.T0.value();
    }
  }

  const double n = bg.n;
  const double a0 = bg.a0;
  const double a1 = bg.a1;
  const double sg = bg.sigma;
  const double mu0 = spec.mu0;
  const double gap = n - 2.0 * mu0;
  const bool vacuum = sg == -1.0;
  // U = 1 + n a₁(1+σ)T/(2a₀) and log U.
  double U = 1.0, logU = 0.0;
  if (!vacuum && a1 != 0.0) {
    if (at_end) {
      U = 0.0;
      logU = -kInf;
    } else if (std::isinf(T)) {
      U = kInf;
      logU = kInf;
    } else {
      const double x = n * a1 * (1.0 + sg) * T / (2.0 * a0);
      U = 1.0 + x;
      logU = std::log1p(x);
    }
  }

  if (t.q_mu0->is_infinite()) {
    if (a1 >= 0.0) return ExtendedReal::finite(a0 * a0);
    if (!vacuum) return ext(a0 * a0 * pow_ext(U, -8.0 * mu0 / (n * (1.0 + sg) * gap)));
    if (std::isinf(T)) return mu0 > 0.0 ? ExtendedReal::infinity() : ExtendedReal::finite(a0 * a0);
    return ext(a0 * a0 * std::exp(-4.0 * mu0 * a1 * T / (a0 * gap)));
  }

  const double q = t.q_mu0->value();
  const double p = spec.p;
  const double log_pref = (p - 1.0) * gap * q / 2.0 * std::log(a0);
  // log J, where A^q = a₀^{(p−1)(n−2μ₀)q/2}·J. Large exponents are kept in
  // log form so that A stays finite when A^q would overflow.
  auto log_growth = [](double scale, double z) {
    // log(scale·(e^z − 1)) for scale·(e^z − 1) > 0.
    if (z > 30.0) return std::log(std::abs(scale)) + z + std::log1p(-std::exp(-z));
    return std::log(scale * std::expm1(z));
  };
  double logJ = 0.0;
  if (a1 == 0.0) {
    logJ = std::log(T);
  } else if (!vacuum) {
    const double alpha = 2.0 * (p - 1.0) * mu0 * q / (n * (1.0 + sg));
    const double c = 2.0 * a0 / (n * a1 * (1.0 + sg));
    const double e = 1.0 - alpha;
    if (std::abs(alpha - 1.0) < 1e-12) {
      logJ = std::isinf(logU) ? kInf : std::log(c * logU);
    } else if (std::isinf(U)) {
      logJ = e > 0.0 ? kInf : std::log(c / (alpha - 1.0));
    } else if (U == 0.0) {
      logJ = e > 0.0 ? std::log(-c / e) : kInf;
    } else {
      logJ = log_growth(c / e, e * logU);
    }
  } else {
    const double beta = a1 * (p - 1.0) * mu0 * q / a0;
    if (beta == 0.0) {
      logJ = std::log(T);
    } else if (std::isinf(T)) {
      logJ = beta > 0.0 ? -std::log(beta) : kInf;
    } else {
      logJ = log_growth(-1.0 / beta, -beta * T);
    }
  }
  if (logJ == kInf) return ExtendedReal::infinity();
  if (logJ == -kInf) return ExtendedReal::finite(0.0);
  return ext(std::exp((log_pref + logJ) / q));
}

RegimeReport classify(const ProblemSpec& spec, EnergySign energy_sign, bool has_weighted_L2) {
  RegimeReport r;
  r.spec = spec;
  r.thresholds = thresholds(spec);
  r.theorem1 = theorem1_verdict(spec);
  r.corollaries = corollary_verdict(spec, energy_sign, has_weighted_L2);
  if (r.thresholds.q_mu0) r.A_full = eval_A(spec, r.thresholds.S0, Window::S);
  return r;
}

namespace {

std::string opt_str(const std::optional<double>& v) { return v ? fmt(*v) : std::string("undefined"); }

std::string lambda_str(const Complex& l) {
  if (l.imag() == 0.0) return fmt(l.real());
  return fmt(l.real()) + (l.imag() < 0 ? "" : "+") + fmt(l.imag()) + "i";
}

}  // namespace

std::string to_text(const RegimeReport& r) {
  std::ostringstream os;
  const auto& s = r.spec;
  const auto& bg = s.background;
  const auto& t = r.thresholds;
  os << "problem: n=" << bg.n << " sigma=" << fmt(bg.sigma) << " a0=" << fmt(bg.a0) << " a1=" << fmt(bg.a1)
     << " lambda=" << lambda_str(s.lambda) << " omega=" << fmt(s.omega) << " sign=" << (s.sign > 0 ? "+" : "-")
     << " p=" << fmt(s.p) << " mu0=" << fmt(s.mu0) << "\n";
  os << "thresholds:\n";
  os << "  p(mu0)  = " << fmt(t.p_crit) << "\n";
  os << "  p1(mu0) = " << opt_str(t.p1_crit) << "\n";
  os << "  p0      = " << t.p0_crit.to_string() << "\n";
  os << "  q(mu0)  = " << (t.q_mu0 ? t.q_mu0->to_string() : std::string("undefined")) << "\n";
  os << "  T0      = " << t.T0.to_string() << "\n";
  os << "  S0      = " << t.S0.to_string() << "\n";
  os << "theorem 1: " << r.theorem1.summary() << "\n";
  for (const auto& f : r.theorem1.fired) os << "  " << f << " fired\n";
  os << "A over (0, S0): " << (r.A_full ? r.A_full->to_string() : std::string("undefined")) << "\n";
  for (const auto& c : r.corollaries) {
    os << "corollary " << c.number << " (" << c.claim << "): " << to_string(c.outcome) << "\n";
    for (const auto& h : c.hypotheses) os << "  [" << to_string(h.status) << "] " << h.text << "\n";
  }
  return os.str();
}

std::string to_kv(const RegimeReport& r) {
  std::ostringstream os;
  const auto& t = r.thresholds;
  os << "p_crit=" << fmt(t.p_crit) << "\n";
  os << "p1_crit=" << opt_str(t.p1_crit) << "\n";
  os << "p0_crit=" << t.p0_crit.to_string() << "\n";
  os << "q_mu0=" << (t.q_mu0 ? t.q_mu0->to_string() : std::string("undefined")) << "\n";
  os << "T0=" << t.T0.to_string() << "\n";
  os << "S0=" << t.S0.to_string() << "\n";
  os << "local_wellposed=" << (r.theorem1.local_wellposed ? "true" : "false") << "\n";
  std::string fired;
  for (const auto& f : r.theorem1.fired) fired += (fired.empty() ? "" : ";") + f;
  os << "fired=" << (fired.empty() ? "none" : fired) << "\n";
  os << "theorem1=" << r.theorem1.summary() << "\n";
  os << "A_full=" << (r.A_full ? r.A_full->to_string() : std::string("undefined")) << "\n";
  for (const auto& c : r.corollaries) os << "corollary" << c.number << "=" << to_string(c.outcome) << "\n";
  return os.str();
}

}  // namespace expanse::classifier
