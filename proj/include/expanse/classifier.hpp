#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expanse/grid.hpp"
#include "expanse/scale_factor.hpp"

namespace expanse::classifier {

struct ProblemSpec {
  ScaleFactorParams background{3, 0.0, 1.0, 0.0};
  Complex lambda{0.0, 0.0};
  double omega = 0.0;
  int sign = +1;
  double p = 1.0;
  double mu0 = 0.0;

  /// Throws InvalidConfig for sign/ω incompatibility, μ₀ ∉ [0, n/2) or p < 1.
  void validate() const;
};

struct Thresholds {
  double p_crit = 0.0;                 // p(μ₀) = 1 + 4/(n − 2μ₀)
  std::optional<double> p1_crit;       // σ ≠ −1 only
  ExtendedReal p0_crit = ExtendedReal::infinity();  // 2/sin²2ω − 1
  std::optional<ExtendedReal> q_mu0;   // absent when p > p(μ₀)
  ExtendedReal T0 = ExtendedReal::infinity();
  ExtendedReal S0 = ExtendedReal::infinity();
};

Thresholds thresholds(const ProblemSpec& spec);

struct Theorem1Verdict {
  bool local_wellposed = false;
  /// Reason when local well-posedness does not apply.
  std::string reason;
  /// Conditions among "(i)".."(vi)" that hold.
  std::vector<std::string> fired;
  [[nodiscard]] bool small_data_global() const { return !fired.empty(); }
  /// "small-data global via (v)", "local only" or "not covered: <reason>".
  [[nodiscard]] std::string summary() const;
};

/// Theorem 1's applicability and the small-data conditions (i)–(vi),
/// checked literally. Equalities between p and a threshold use a relative
/// tolerance of 1e-12.
Theorem1Verdict theorem1_verdict(const ProblemSpec& spec);

enum class HypothesisStatus { Satisfied, Violated, Unverifiable };
std::string_view to_string(HypothesisStatus s);

struct Hypothesis {
  std::string text;
  HypothesisStatus status;
};

enum class CorollaryOutcome { Applies, NotApplicable, Undetermined };
std::string_view to_string(CorollaryOutcome o);

struct CorollaryVerdict {
  int number = 0;        // 1..4
  std::string claim;     // "global" or "blow-up"
  CorollaryOutcome outcome = CorollaryOutcome::NotApplicable;
  std::vector<Hypothesis> hypotheses;
};

/// Sign of E(u₀), when known.
enum class EnergySign { Negative, Zero, Positive, Unknown };
std::string_view to_string(EnergySign e);

/// Corollaries 1–4 with every hypothesis listed. λ must be real; a complex
/// λ yields four NotApplicable verdicts.
std::vector<CorollaryVerdict> corollary_verdict(const ProblemSpec& spec, EnergySign energy_sign,
                                                bool has_weighted_L2);

enum class Window { S, T };

/// A = ‖a(s)²w(s)^{p−1}‖ in L^{q(μ₀)} over (0, S) from the closed forms.
/// `horizon` is S (Window::S) or T (Window::T) and may be the infinite
/// horizon. Throws DomainError for p > p(μ₀) or a horizon past S₀ / T₀.
ExtendedReal eval_A(const ProblemSpec& spec, const ExtendedReal& horizon, Window window);

struct RegimeReport {
  ProblemSpec spec;
  Thresholds thresholds;
  Theorem1Verdict theorem1;
  std::vector<CorollaryVerdict> corollaries;
  /// A over the full window (0, S₀); absent when p > p(μ₀).
  std::optional<ExtendedReal> A_full;
};

RegimeReport classify(const ProblemSpec& spec, EnergySign energy_sign = EnergySign::Unknown,
                      bool has_weighted_L2 = false);

std::string to_text(const RegimeReport& report);
/// One "key=value" pair per line.
std::string to_kv(const RegimeReport& report);

}  // namespace expanse::classifier
