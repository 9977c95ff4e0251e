#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace expanse {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

/// Periodic box [c − L/2, c + L/2)^d sampled with N points per axis.
struct GridSpec {
  int dim = 1;
  std::size_t points = 256;
  double length = 32.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};

  /// Throws InvalidConfig unless d ∈ {1,2,3}, N ≥ 8 is a power of two and L > 0.
  void validate() const;
  [[nodiscard]] double spacing() const { return length / static_cast<double>(points); }
  [[nodiscard]] std::size_t total() const;
  /// h^d, the quadrature weight of one cell.
  [[nodiscard]] double cell_volume() const;
};

/// Coordinates, wavenumbers and FFTW transforms for one GridSpec.
///
/// Transforms run in place on caller-owned fields. The forward transform is
/// unnormalised and the inverse divides by the point count. Instances are
/// immutable after construction and may be shared across threads.
class SpectralGrid {
 public:
  explicit SpectralGrid(const GridSpec& spec);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t size() const { return total_; }

  /// Coordinate of point i along one axis, centred on spec.center.
  [[nodiscard]] const std::vector<double>& axis(int a) const { return axes_[a]; }
  /// |x − c|² at every flat index.
  [[nodiscard]] const std::vector<double>& radius_sq() const { return r2_; }
  /// |ξ|² at every flat index in FFTW order.
  [[nodiscard]] const std::vector<double>& wavenumber_sq() const { return k2_; }
  /// Integer mode index of point i along one axis (0, 1, ..., N/2−1, −N/2, ..., −1).
  [[nodiscard]] long mode_index(std::size_t i) const;
  /// Flat index from per-axis indices, last axis fastest.
  [[nodiscard]] std::size_t flat(std::size_t i0, std::size_t i1 = 0, std::size_t i2 = 0) const;

  void forward(Field& u) const;
  void inverse(Field& u) const;

  /// ∫|u|² by the rectangle rule.
  [[nodiscard]] double l2_sq(const Field& u) const;
  /// ∫|∇u|² by Parseval with spectral derivatives.
  [[nodiscard]] double grad_sq(const Field& u) const;
  /// Spectral Laplacian into `out`.
  void laplacian(const Field& u, Field& out) const;

 private:
  GridSpec spec_;
  std::size_t total_ = 0;
  std::array<std::vector<double>, 3> axes_;
  std::vector<double> r2_;
  std::vector<double> k2_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

}  // namespace expanse
