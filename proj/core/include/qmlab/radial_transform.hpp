#pragma once

#include <functional>
#include <span>

#include "qmlab/kernel.hpp"

namespace qmlab {

/// Numeric 3-d radial Fourier transform
///   Vk(k) = (4 pi / k) \int_0^{r_max} r sin(kr) V(r) dr
/// via adaptive quadrature over half-period chunks. Serves as the
/// independent cross-check for the analytic kernel forms; the caller is
/// responsible for choosing r_max large enough that the truncated tail is
/// below tol. Throws AccuracyError with the achieved residual when the
/// quadrature cannot meet tol.
FourierSamples numeric_radial_transform(
    const std::function<double(double)>& v_of_r, std::span<const double> k_grid,
    double r_max, double tol);

}  // namespace qmlab
