#include "qmlab/potential.hpp"

#include <cmath>

#include "qmlab/errors.hpp"
#include "qmlab/fft.hpp"

namespace qmlab {

std::vector<double> kernel_mode_table(const Grid& grid,
                                      const InteractionKernel& kernel,
                                      ExternalPotentialMode policy) {
  std::vector<double> table(grid.size(), 0.0);
  if (kernel.is_none()) return table;

  const std::size_t n0 = grid.shape[0], n1 = grid.shape[1], n2 = grid.shape[2];
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < n0; ++i0)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t i2 = 0; i2 < n2; ++i2, ++idx) {
        double k2 = 0.0;
        const std::size_t idxs[3] = {i0, i1, i2};
        for (int a = 0; a < grid.dims; ++a) {
          const double k = grid.wavenumber(a, idxs[a]);
          k2 += k * k;
        }
        if (k2 == 0.0) {
          if (policy == ExternalPotentialMode::none) {
            const auto vk0 = kernel.fourier_at_zero();
            if (!vk0)
              throw ConfigurationError(
                  "kernel has a divergent k = 0 mode; select the "
                  "neutralizing_background or jeans_swindle policy");
            table[idx] = *vk0;
          }
          // neutralizing background / Jeans swindle: homogeneous mode dropped
          continue;
        }
        table[idx] = kernel.fourier(std::sqrt(k2));
      }
  return table;
}

std::vector<double> nonlocal_potential(const Grid& grid,
                                       std::span<const double> density,
                                       const InteractionKernel& kernel,
                                       ExternalPotentialMode policy) {
  if (density.size() != grid.size())
    throw InputError("nonlocal_potential: density size does not match grid");
  std::vector<double> phi(grid.size(), 0.0);
  if (kernel.is_none()) return phi;

  const std::vector<double> table = kernel_mode_table(grid, kernel, policy);
  SpectralTransform fft(grid);
  AlignedBuffer<std::complex<double>> work(grid.size());
  for (std::size_t i = 0; i < density.size(); ++i) work[i] = density[i];
  fft.forward(work.data());
  for (std::size_t i = 0; i < table.size(); ++i) work[i] *= table[i];
  fft.backward(work.data());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = work[i].real();
  return phi;
}

}  // namespace qmlab
