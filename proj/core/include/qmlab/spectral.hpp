#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "qmlab/fft.hpp"
#include "qmlab/grid.hpp"

namespace qmlab {

/// Spectral differential operators on one grid geometry. Owns the
/// transform and scratch storage; not safe for concurrent use of a single
/// instance (create one per thread).
///
/// First derivatives zero the Nyquist mode (its sign is ambiguous); the
/// Laplacian keeps it.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);

  const Grid& grid() const { return grid_; }

  /// d/dx_axis of a real field.
  std::vector<double> derivative(std::span<const double> f, int axis);

  /// Gradient components 0..dims-1 of a real field.
  std::array<std::vector<double>, 3> gradient(std::span<const double> f);

  /// Laplacian of a real field.
  std::vector<double> laplacian(std::span<const double> f);

  /// Divergence of a vector field (components indexed by axis).
  std::vector<double> divergence(const std::array<std::vector<double>, 3>& v);

  /// Gradient of a complex field along one axis.
  void derivative_complex(std::span<const std::complex<double>> f, int axis,
                          std::span<std::complex<double>> out);

  /// Zero-mean scalar potential S with grad S = v (v must be curl-free and
  /// mean-free; the k = 0 component of v is ignored).
  std::vector<double> potential_of_gradient(
      const std::array<std::vector<double>, 3>& v);

 private:
  template <typename MultiplierPerAxis>
  void apply_multiplier(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out,
                        MultiplierPerAxis&& mult);

  Grid grid_;
  SpectralTransform fft_;
  AlignedBuffer<std::complex<double>> scratch_;
  AlignedBuffer<std::complex<double>> scratch2_;
};

}  // namespace qmlab
