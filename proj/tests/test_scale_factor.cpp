#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "expanse/errors.hpp"
#include "expanse/scale_factor.hpp"
#include "oracles.hpp"

using namespace expanse;

namespace {

ScaleFactorParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ScaleFactorParams p;
  p.n = 1 + static_cast<int>(U(rng) * 5.0);
  p.sigma = U(rng) < 0.15 ? -1.0 : -2.0 + 4.0 * U(rng);
  p.a0 = 0.5 + 1.5 * U(rng);
  p.a1 = U(rng) < 0.1 ? 0.0 : -1.0 + 2.0 * U(rng);
  return p;
}

double sample_time(const ScaleFactorParams& p, double u) {
  const double T0 = oracle::time_horizon(p);
  return u * (std::isfinite(T0) ? 0.95 * T0 : 10.0);
}

}  // namespace

TEST_CASE("eval_a closed forms") {
  CHECK(ScaleFactor({3, 0.0, 1.7, 0.0}).eval_a(12.0) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(ScaleFactor({3, 0.0, 1.0, 1.0}).eval_a(2.0) == doctest::Approx(std::pow(4.0, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(ScaleFactor({3, -1.0, 2.0, 1.0}).eval_a(2.0) == doctest::Approx(2.0 * std::numbers::e).epsilon(1e-14));
}

TEST_CASE("eval_w") {
  const ScaleFactor flat({3, 0.0, 1.0, 0.0});
  CHECK(flat.eval_w(0.0) == 1.0);
  CHECK(flat.eval_w(7.0) == doctest::Approx(1.0).epsilon(1e-15));
  // n=2: a(t) = 1 + t.
  CHECK(ScaleFactor({2, 0.0, 1.0, 1.0}).eval_w(1.5) == doctest::Approx(1.0 / 2.5).epsilon(1e-14));
  CHECK(ScaleFactor({4, 0.0, 1.0, 1.0}).eval_w(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("time_to_s and s_to_time examples") {
  CHECK(ScaleFactor({1, 0.0, 1.0, 0.0}).time_to_s(5.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(ScaleFactor({1, 0.0, 1.0, 0.0}).s_to_time(5.0) == doctest::Approx(5.0).epsilon(1e-15));
  const ScaleFactor vac({3, -1.0, 1.0, 1.0});
  const double s1 = (1.0 - std::exp(-2.0)) / 2.0;
  CHECK(vac.time_to_s(1.0) == doctest::Approx(s1).epsilon(1e-14));
  CHECK(vac.s_to_time(s1) == doctest::Approx(1.0).epsilon(1e-13));
  const ScaleFactor dust({3, 0.0, 1.0, 1.0});
  CHECK(dust.time_to_s(1e12) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(dust.time_to_s(dust.s_to_time(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("horizon_S0 examples") {
  CHECK(horizon_S0({3, 0.0, 1.0, 1.0}).value() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(horizon_S0({3, 0.0, 1.0, 0.0}).is_infinite());
  CHECK(horizon_S0({3, -1.0, 1.0, 1.0}).value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(horizon_T0({3, 0.0, 1.0, 1.0}).is_infinite());
  CHECK(horizon_T0({3, 0.0, 1.0, -1.0}).value() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("monotone s(t)") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_params(rng);
    const ScaleFactor sf(p);
    double t1 = sample_time(p, U(rng)), t2 = sample_time(p, U(rng));
    if (t1 == t2) continue;
    if (t1 > t2) std::swap(t1, t2);
    // Strict until s(t) saturates at the last double below S₀.
    CHECK(sf.time_to_s(t1) <= sf.time_to_s(t2));
    if (sf.time_to_s(t2) < 0.99 * sf.S0().as_double()) CHECK(sf.time_to_s(t1) < sf.time_to_s(t2));
    CHECK(sf.S0().exceeds(sf.time_to_s(t2)));
  }
}

TEST_CASE("s(t) agrees with quadrature") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_params(rng);
    const double t = sample_time(p, U(rng));
    const double s = ScaleFactor(p).time_to_s(t);
    CHECK(std::abs(s - oracle::s_of_t(p, t)) <= 1e-10 * (1.0 + s));
  }
}

TEST_CASE("round trip s_to_time(time_to_s(t))") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_params(rng);
    const ScaleFactor sf(p);
    const double t = sample_time(p, 0.01 + 0.99 * U(rng));
    const double s = sf.time_to_s(t);
    // Near-stiff backgrounds can push s(t) past the double range.
    if (!std::isfinite(s)) continue;
    // dt/ds = a², so an ulp in s moves t by about a²·ulp.
    const double a = sf.eval_a(t);
    const double tol = 1e-12 * t + 8.0 * std::numeric_limits<double>::epsilon() * s * a * a;
    CHECK(std::abs(sf.s_to_time(s) - t) <= tol);
    if (sf.S0().exceeds(2.0 * s) || sf.S0().is_infinite()) {
      CHECK(sf.time_to_s(sf.s_to_time(s)) == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("ds/dt = a^-2 and da/ds = a^2 da/dt") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_params(rng);
    const ScaleFactor sf(p);
    const double t = sample_time(p, 0.05 + 0.9 * U(rng));
    if (!sf.S0().is_infinite() && sf.time_to_s(t) > 0.99 * sf.S0().value()) continue;
    const double rate = std::abs(sf.eval_dadt(t) / sf.eval_a(t));
    const double h = 1e-5 * std::min(1.0 + t, 1.0 / rate);
    const double fd = (sf.time_to_s(t + h) - sf.time_to_s(t - h)) / (2.0 * h);
    const double a = sf.eval_a(t);
    CHECK(fd == doctest::Approx(1.0 / (a * a)).epsilon(1e-6));
    const double fa = (sf.eval_a(t + h) - sf.eval_a(t - h)) / (2.0 * h);
    CHECK(sf.eval_dadt(t) == doctest::Approx(fa).epsilon(1e-6).scale(1.0));
    CHECK(sf.dads_at_s(sf.time_to_s(t)) == doctest::Approx(a * a * sf.eval_dadt(t)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("a(s)^(2 - n(p-1)/2) is constant at p = 1 + 4/n") {
  for (int n = 1; n <= 4; ++n) {
    const double p = 1.0 + 4.0 / n;
    const ScaleFactor sf({n, 0.3, 1.3, 0.7});
    for (double s : {0.0, 0.1, 0.5, 1.0}) {
      if (!sf.S0().exceeds(s)) continue;
      CHECK(std::pow(sf.a_at_s(s), 2.0 - n * (p - 1.0) / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("continuity across n(1+sigma) = 4") {
  const double t = 3.0;
  const double mid = ScaleFactor({2, 1.0, 1.0, 0.5}).time_to_s(t);
  for (double d : {1e-9, -1e-9}) {
    CHECK(ScaleFactor({2, 1.0 + d, 1.0, 0.5}).time_to_s(t) == doctest::Approx(mid).epsilon(1e-7));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(ScaleFactor({3, 0.0, -1.0, 0.0}), DomainError);
  const ScaleFactor crunch({3, 0.0, 1.0, -1.0});
  CHECK_THROWS_AS((void)crunch.eval_a(1.0), DomainError);
  const ScaleFactor dust({3, 0.0, 1.0, 1.0});
  CHECK_THROWS_AS((void)dust.s_to_time(2.0), DomainError);
  CHECK(dust.S0().to_string() == "2");
  CHECK(ScaleFactor({3, 0.0, 1.0, 0.0}).S0().to_string() == "inf");
}
