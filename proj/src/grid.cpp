#include "expanse/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Field& u) { return reinterpret_cast<fftw_complex*>(u.data()); }

}  // namespace

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw InvalidConfig("grid.dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (points < 8 || (points & (points - 1)) != 0) {
    throw InvalidConfig("grid.points must be a power of two >= 8, got " + std::to_string(points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidConfig("grid.length must be > 0");
}

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int a = 0; a < dim; ++a) t *= points;
  return t;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

SpectralGrid::SpectralGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  total_ = spec_.total();
  const std::size_t N = spec_.points;
  const double h = spec_.spacing();
  const double dk = 2.0 * std::numbers::pi / spec_.length;

  std::vector<double> k1(N);
  for (int a = 0; a < spec_.dim; ++a) {
    axes_[a].resize(N);
    for (std::size_t i = 0; i < N; ++i) axes_[a][i] = spec_.center[a] - 0.5 * spec_.length + h * static_cast<double>(i);
  }
  for (std::size_t i = 0; i < N; ++i) k1[i] = dk * static_cast<double>(mode_index(i));

  r2_.assign(total_, 0.0);
  k2_.assign(total_, 0.0);
  const std::size_t n1 = spec_.dim > 1 ? N : 1;
  const std::size_t n2 = spec_.dim > 2 ? N : 1;
  for (std::size_t i0 = 0; i0 < N; ++i0) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const std::size_t f = flat(i0, i1, i2);
        const std::array<std::size_t, 3> idx{i0, i1, i2};
        double r2 = 0.0, k2 = 0.0;
        for (int a = 0; a < spec_.dim; ++a) {
          const double x = axes_[a][idx[a]] - spec_.center[a];
          r2 += x * x;
          k2 += k1[idx[a]] * k1[idx[a]];
        }
        r2_[f] = r2;
        k2_[f] = k2;
      }
    }
  }

  std::array<int, 3> dims{};
  for (int a = 0; a < spec_.dim; ++a) dims[a] = static_cast<int>(N);
  Field scratch(total_);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_fwd_ = fftw_plan_dft(spec_.dim, dims.data(), as_fftw(scratch), as_fftw(scratch), FFTW_FORWARD, flags);
  plan_inv_ = fftw_plan_dft(spec_.dim, dims.data(), as_fftw(scratch), as_fftw(scratch), FFTW_BACKWARD, flags);
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

long SpectralGrid::mode_index(std::size_t i) const {
  const auto N = static_cast<long>(spec_.points);
  const auto j = static_cast<long>(i);
  return j < N / 2 ? j : j - N;
}

std::size_t SpectralGrid::flat(std::size_t i0, std::size_t i1, std::size_t i2) const {
  const std::size_t N = spec_.points;
  switch (spec_.dim) {
    case 1: return i0;
    case 2: return i0 * N + i1;
    default: return (i0 * N + i1) * N + i2;
  }
}

void SpectralGrid::forward(Field& u) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), as_fftw(u), as_fftw(u));
}

void SpectralGrid::inverse(Field& u) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_inv_), as_fftw(u), as_fftw(u));
  const double inv = 1.0 / static_cast<double>(total_);
  for (auto& z : u) z *= inv;
}

double SpectralGrid::l2_sq(const Field& u) const {
  double s = 0.0;
  for (const auto& z : u) s += std::norm(z);
  return s * spec_.cell_volume();
}

double SpectralGrid::grad_sq(const Field& u) const {
  Field uh = u;
  forward(uh);
  double s = 0.0;
  for (std::size_t i = 0; i < total_; ++i) s += k2_[i] * std::norm(uh[i]);
  return s * spec_.cell_volume() / static_cast<double>(total_);
}

void SpectralGrid::laplacian(const Field& u, Field& out) const {
  out = u;
  forward(out);
  for (std::size_t i = 0; i < total_; ++i) out[i] *= -k2_[i];
  inverse(out);
}

}  // namespace expanse
