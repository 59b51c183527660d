#pragma once

#include <complex>

#include "qmlab/grid.hpp"

namespace qmlab {

/// In-place complex-to-complex FFT pair for one grid geometry.
///
/// Conventions: forward applies e^{-i k x} (physics sign), backward is
/// normalized by 1/N so backward(forward(x)) == x to rounding. Plans are
/// created with FFTW_ESTIMATE so planning is deterministic and results are
/// reproducible run to run. Buffers must come from AlignedBuffer (the
/// planner assumes FFT-aligned storage). Plan creation is serialized
/// internally; execution is thread-safe on distinct buffers.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;
  SpectralTransform(SpectralTransform&&) noexcept;
  SpectralTransform& operator=(SpectralTransform&&) noexcept;

  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

  std::size_t size() const { return n_; }

 private:
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  std::size_t n_ = 0;
  AlignedBuffer<std::complex<double>> plan_basis_;
};

}  // namespace qmlab
