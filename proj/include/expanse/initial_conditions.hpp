#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "expanse/grid.hpp"

namespace expanse {

/// Parameters shared by the named initial-condition generators. Each
/// generator reads only the fields it needs.
struct InitialSpec {
  std::string kind = "gaussian";  // gaussian | ring | random-band-limited
  double amplitude = 1.0;
  double width = 1.0;
  double phase_ramp = 0.0;  // wavenumber of e^{i k x} along axis 0
  double radius = 2.0;
  std::uint64_t seed = 0;
  double cutoff = 4.0;      // largest integer mode |m| kept
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

/// A·exp(−|x−c|²/(2 width²))·exp(i k₀ x₀).
Field gaussian(const SpectralGrid& grid, double width, double amplitude, double phase_ramp,
               const std::array<double, 3>& center = {0.0, 0.0, 0.0});

/// A·exp(−(|x−c| − radius)²/(2 width²)).
Field ring(const SpectralGrid& grid, double radius, double width, double amplitude,
           const std::array<double, 3>& center = {0.0, 0.0, 0.0});

/// Random Fourier coefficients on the integer modes |m|₂ ≤ cutoff, divided by
/// their ℓ¹ norm and multiplied by `amplitude`, so max|u| ≤ amplitude.
/// Coefficients are drawn in a fixed mode order from mt19937_64, so the field
/// is reproducible across platforms and does not depend on N once N > 2·cutoff.
Field random_band_limited(const SpectralGrid& grid, std::uint64_t seed, double cutoff, double amplitude);

/// Dispatch on spec.kind; throws InvalidConfig for unknown names.
Field make_initial(const SpectralGrid& grid, const InitialSpec& spec);

}  // namespace expanse
