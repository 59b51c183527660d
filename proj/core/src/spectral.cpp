#include "qmlab/spectral.hpp"

#include <cmath>

#include "qmlab/errors.hpp"

namespace qmlab {

SpectralOps::SpectralOps(const Grid& grid)
    : grid_(grid), fft_(grid), scratch_(grid.size()), scratch2_(grid.size()) {}

namespace {
// True for the (single, even-size) Nyquist bin along an axis.
inline bool is_nyquist(std::size_t index, std::size_t n) {
  return index == n / 2;
}
}  // namespace

template <typename MultiplierPerAxis>
void SpectralOps::apply_multiplier(std::span<const std::complex<double>> in,
                                   std::span<std::complex<double>> out,
                                   MultiplierPerAxis&& mult) {
  const std::size_t n = grid_.size();
  if (in.size() != n || out.size() != n)
    throw InputError("spectral op: field size does not match grid");
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = in[i];
  fft_.forward(scratch_.data());

  const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                    n2 = grid_.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx)
        scratch_[idx] *= mult(i0, i1, i2);

  fft_.backward(scratch_.data());
  for (std::size_t i = 0; i < n; ++i) out[i] = scratch_[i];
}

std::vector<double> SpectralOps::derivative(std::span<const double> f,
                                            int axis) {
  const std::size_t n = grid_.size();
  if (f.size() != n) throw InputError("derivative: field size mismatch");
  if (axis < 0 || axis >= grid_.dims) throw InputError("derivative: bad axis");
  for (std::size_t i = 0; i < n; ++i) scratch2_[i] = f[i];

  const std::size_t nyq = grid_.shape[axis] / 2;
  auto mult = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
    const std::size_t ia = (axis == 0) ? i0 : (axis == 1) ? i1 : i2;
    if (is_nyquist(ia, grid_.shape[axis]) && nyq > 0)
      return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, grid_.wavenumber(axis, ia));
  };
  apply_multiplier(scratch2_.span(), scratch2_.span(), mult);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = scratch2_[i].real();
  return out;
}

std::array<std::vector<double>, 3> SpectralOps::gradient(
    std::span<const double> f) {
  std::array<std::vector<double>, 3> g;
  for (int a = 0; a < grid_.dims; ++a) g[a] = derivative(f, a);
  return g;
}

std::vector<double> SpectralOps::laplacian(std::span<const double> f) {
  const std::size_t n = grid_.size();
  if (f.size() != n) throw InputError("laplacian: field size mismatch");
  for (std::size_t i = 0; i < n; ++i) scratch2_[i] = f[i];

  auto mult = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
    double k2 = 0.0;
    const std::size_t idxs[3] = {i0, i1, i2};
    for (int a = 0; a < grid_.dims; ++a) {
      const double k = grid_.wavenumber(a, idxs[a]);
      k2 += k * k;
    }
    return std::complex<double>(-k2, 0.0);
  };
  apply_multiplier(scratch2_.span(), scratch2_.span(), mult);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = scratch2_[i].real();
  return out;
}

std::vector<double> SpectralOps::divergence(
    const std::array<std::vector<double>, 3>& v) {
  std::vector<double> out(grid_.size(), 0.0);
  for (int a = 0; a < grid_.dims; ++a) {
    const std::vector<double> d = derivative(v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

void SpectralOps::derivative_complex(std::span<const std::complex<double>> f,
                                     int axis,
                                     std::span<std::complex<double>> out) {
  if (axis < 0 || axis >= grid_.dims) throw InputError("derivative: bad axis");
  auto mult = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
    const std::size_t ia = (axis == 0) ? i0 : (axis == 1) ? i1 : i2;
    if (is_nyquist(ia, grid_.shape[axis]))
      return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, grid_.wavenumber(axis, ia));
  };
  apply_multiplier(f, out, mult);
}

std::vector<double> SpectralOps::potential_of_gradient(
    const std::array<std::vector<double>, 3>& v) {
  const std::size_t n = grid_.size();
  // Assemble (k . v_hat) / |k|^2 in spectral space, one component at a time.
  AlignedBuffer<std::complex<double>> acc(n);
  for (int a = 0; a < grid_.dims; ++a) {
    if (v[a].size() != n)
      throw InputError("potential_of_gradient: component size mismatch");
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = v[a][i];
    fft_.forward(scratch_.data());
    const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                      n2 = grid_.shape[2];
    std::size_t idx = 0;
    for (std::size_t i0 = 0; i0 < n0; ++i0)
      for (std::size_t i1 = 0; i1 < n1; ++i1)
        for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
          const std::size_t idxs[3] = {i0, i1, i2};
          const std::size_t ia = idxs[a];
          double k = grid_.wavenumber(a, ia);
          if (is_nyquist(ia, grid_.shape[a])) k = 0.0;
          acc[idx] += k * scratch_[idx];
        }
  }
  // S_hat = -i (k . v_hat) / |k|^2, zero mean.
  const std::size_t n0 = grid_.shape[0], n1 = grid_.shape[1],
                    n2 = grid_.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        double k2 = 0.0;
        const std::size_t idxs[3] = {i0, i1, i2};
        for (int a = 0; a < grid_.dims; ++a) {
          double k = grid_.wavenumber(a, idxs[a]);
          if (is_nyquist(idxs[a], grid_.shape[a])) k = 0.0;
          k2 += k * k;
        }
        if (k2 > 0.0) {
          acc[idx] = std::complex<double>(0.0, -1.0) * acc[idx] / k2;
        } else {
          acc[idx] = 0.0;
        }
      }
  fft_.backward(acc.data());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].real();
  return out;
}

}  // namespace qmlab
