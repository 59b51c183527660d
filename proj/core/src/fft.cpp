#include "qmlab/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {
// FFTW plan creation/destruction is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralTransform::SpectralTransform(const Grid& grid)
    : n_(grid.size()), plan_basis_(grid.size()) {
  int dims[3];
  for (int a = 0; a < grid.dims; ++a) dims[a] = static_cast<int>(grid.shape[a]);
  auto* basis = reinterpret_cast<fftw_complex*>(plan_basis_.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft(grid.dims, dims, basis, basis, FFTW_FORWARD,
                            FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft(grid.dims, dims, basis, basis, FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw Error("FFT planning failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

SpectralTransform::SpectralTransform(SpectralTransform&& o) noexcept
    : plan_fwd_(o.plan_fwd_),
      plan_bwd_(o.plan_bwd_),
      n_(o.n_),
      plan_basis_(std::move(o.plan_basis_)) {
  o.plan_fwd_ = nullptr;
  o.plan_bwd_ = nullptr;
}

SpectralTransform& SpectralTransform::operator=(SpectralTransform&& o) noexcept {
  if (this != &o) {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
      if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    }
    plan_fwd_ = o.plan_fwd_;
    plan_bwd_ = o.plan_bwd_;
    n_ = o.n_;
    plan_basis_ = std::move(o.plan_basis_);
    o.plan_fwd_ = nullptr;
    o.plan_bwd_ = nullptr;
  }
  return *this;
}

void SpectralTransform::forward(std::complex<double>* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), d, d);
}

void SpectralTransform::backward(std::complex<double>* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), d, d);
  const double inv = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] *= inv;
}

}  // namespace qmlab
