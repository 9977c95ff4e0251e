#include "expanse/initial_conditions.hpp"

#include <cmath>
#include <random>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

template <class F>
Field sample(const SpectralGrid& grid, const std::array<double, 3>& center, F&& f) {
  const auto& spec = grid.spec();
  const std::size_t N = spec.points;
  const std::size_t n1 = spec.dim > 1 ? N : 1;
  const std::size_t n2 = spec.dim > 2 ? N : 1;
  Field u(grid.size());
  for (std::size_t i0 = 0; i0 < N; ++i0) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const std::array<std::size_t, 3> idx{i0, i1, i2};
        std::array<double, 3> x{};
        double r2 = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
          x[a] = grid.axis(a)[idx[a]];
          const double d = x[a] - center[a];
          r2 += d * d;
        }
        u[grid.flat(i0, i1, i2)] = f(x, r2);
      }
    }
  }
  return u;
}

}  // namespace

Field gaussian(const SpectralGrid& grid, double width, double amplitude, double phase_ramp,
               const std::array<double, 3>& center) {
  if (!(width > 0.0)) throw InvalidConfig("initial.width must be > 0");
  const double inv = 1.0 / (2.0 * width * width);
  return sample(grid, center, [&](const std::array<double, 3>& x, double r2) {
    return amplitude * std::exp(-r2 * inv) * std::polar(1.0, phase_ramp * x[0]);
  });
}

Field ring(const SpectralGrid& grid, double radius, double width, double amplitude,
           const std::array<double, 3>& center) {
  if (!(width > 0.0)) throw InvalidConfig("initial.width must be > 0");
  if (!(radius >= 0.0)) throw InvalidConfig("initial.radius must be >= 0");
  const double inv = 1.0 / (2.0 * width * width);
  return sample(grid, center, [&](const std::array<double, 3>&, double r2) {
    const double d = std::sqrt(r2) - radius;
    return Complex(amplitude * std::exp(-d * d * inv), 0.0);
  });
}

Field random_band_limited(const SpectralGrid& grid, std::uint64_t seed, double cutoff, double amplitude) {
  const auto& spec = grid.spec();
  if (!(cutoff >= 0.0)) throw InvalidConfig("initial.cutoff must be >= 0");
  const long mmax = static_cast<long>(std::floor(cutoff));
  if (2 * mmax >= static_cast<long>(spec.points)) {
    throw InvalidConfig("initial.cutoff must be below N/2 for a band-limited field");
  }
  const auto N = static_cast<long>(spec.points);
  auto wrap = [N](long m) { return static_cast<std::size_t>(m < 0 ? m + N : m); };

  std::mt19937_64 rng(seed);
  Field uh(grid.size(), Complex(0.0, 0.0));
  double l1 = 0.0;
  const long m1 = spec.dim > 1 ? mmax : 0;
  const long m2 = spec.dim > 2 ? mmax : 0;
  for (long a = -mmax; a <= mmax; ++a) {
    for (long b = -m1; b <= m1; ++b) {
      for (long c = -m2; c <= m2; ++c) {
        const double re = uniform_pm1(rng);
        const double im = uniform_pm1(rng);
        if (static_cast<double>(a * a + b * b + c * c) > cutoff * cutoff) continue;
        uh[grid.flat(wrap(a), wrap(b), wrap(c))] = Complex(re, im);
        l1 += std::hypot(re, im);
      }
    }
  }
  if (l1 > 0.0) {
    const double scale = amplitude * static_cast<double>(grid.size()) / l1;
    for (auto& z : uh) z *= scale;
  }
  grid.inverse(uh);
  return uh;
}

Field make_initial(const SpectralGrid& grid, const InitialSpec& s) {
  if (s.kind == "gaussian") return gaussian(grid, s.width, s.amplitude, s.phase_ramp, s.center);
  if (s.kind == "ring") return ring(grid, s.radius, s.width, s.amplitude, s.center);
  if (s.kind == "random-band-limited") return random_band_limited(grid, s.seed, s.cutoff, s.amplitude);
  throw InvalidConfig("initial.kind: unknown generator '" + s.kind +
                      "' (expected gaussian, ring or random-band-limited)");
}

}  // namespace expanse
