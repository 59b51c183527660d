#pragma once

#include <span>
#include <vector>

#include "qmlab/grid.hpp"
#include "qmlab/medium.hpp"

namespace qmlab {

/// Per-mode kernel values Vk(|k|) over the grid's FFT layout. The k = 0
/// entry is 0 under the neutralizing-background and Jeans-swindle policies
/// (the homogeneous mode does not source the potential); with policy none
/// it is the finite Vk(0) when one exists, otherwise a ConfigurationError
/// (divergent zero mode).
std::vector<double> kernel_mode_table(const Grid& grid,
                                      const InteractionKernel& kernel,
                                      ExternalPotentialMode policy);

/// Interaction potential Phi = convolution of the density with the kernel,
/// evaluated spectrally: Phi = F^{-1}[ Vk(k) F[n] ].
std::vector<double> nonlocal_potential(const Grid& grid,
                                       std::span<const double> density,
                                       const InteractionKernel& kernel,
                                       ExternalPotentialMode policy);

}  // namespace qmlab
