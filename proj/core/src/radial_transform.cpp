#include "qmlab/radial_transform.hpp"

#include <cmath>

#include "qmlab/errors.hpp"

namespace qmlab {

FourierSamples numeric_radial_transform(
    const std::function<double(double)>& v_of_r, std::span<const double> k_grid,
    double r_max, double tol) {
  if (!(r_max > 0.0)) throw InputError("numeric_radial_transform: r_max must be > 0");
  if (!(tol > 0.0)) throw InputError("numeric_radial_transform: tol must be > 0");
  FourierSamples out;
  out.k.reserve(k_grid.size());
  out.vk.reserve(k_grid.size());
  for (double k : k_grid) {
    if (!(k > 0.0))
      throw DomainError("numeric_radial_transform requires k > 0");
    // Integrand r sin(kr) V(r); tolerance is requested on Vk itself, so the
    // integral gets tol * k / 4 pi.
    const auto f = [&](double r) { return r * std::sin(k * r) * v_of_r(r); };
    const double integral_tol = tol * k / (4.0 * M_PI);
    const QuadratureResult q =
        integrate_oscillatory(f, 0.0, r_max, k, integral_tol);
    out.k.push_back(k);
    out.vk.push_back(4.0 * M_PI / k * q.value);
  }
  return out;
}

}  // namespace qmlab
