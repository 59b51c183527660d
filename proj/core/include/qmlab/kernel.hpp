#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmlab/numerics.hpp"

namespace qmlab {

/// Sampled Fourier transform of a radial interaction, ascending k > 0.
struct FourierSamples {
  std::vector<double> k;
  std::vector<double> vk;
};

/// A long-range two-body interaction, defined by its Fourier transform
/// Vk(k). Builtin forms:
///   none                 Vk = 0
///   poisson(G)           V(r) = G/r          <=> Vk = 4 pi G / k^2
///   coulomb_cubed(A, B)  V(r) = -A/r + B/r^3 <=> Vk = -4 pi A / k^2 + 2 pi B
///   custom tables/closures for everything else
///
/// The 1/r^3 part of coulomb_cubed enters only through the constant 2 pi B
/// its dispersion contribution corresponds to; no real-space regularization
/// is chosen for it.
class InteractionKernel {
 public:
  enum class Form { none, poisson, coulomb_cubed, custom_table, custom_closure };

  InteractionKernel() : form_(Form::none) {}

  static InteractionKernel none() { return InteractionKernel{}; }
  static InteractionKernel poisson(double coupling);
  static InteractionKernel coulomb_cubed(double a_coeff, double b_coeff);
  static InteractionKernel custom_table(FourierSamples samples);
  /// Closure over k; domain (k_lo, k_hi) guards evaluation (0, inf by
  /// default). vk_at_zero declares a finite k = 0 limit for kernels that
  /// have one (needed only under the `none` background policy).
  static InteractionKernel custom_closure(
      std::function<double(double)> vk, double k_lo = 0.0,
      double k_hi = 0.0 /* 0 = unbounded */,
      std::optional<double> vk_at_zero = std::nullopt);

  /// Vk at wavenumber k > 0. Throws DomainError for k <= 0 and InputError
  /// outside a table's sampled range.
  double fourier(double k) const;

  /// Finite Vk(0) when one exists (only the trivial kernel); nullopt means
  /// the zero mode is divergent or unknown and must be handled by policy.
  std::optional<double> fourier_at_zero() const;

  Form form() const { return form_; }
  bool is_none() const { return form_ == Form::none; }
  double coupling() const { return coupling_; }

  /// Evaluable k range (lo, hi); hi = +inf for analytic forms.
  std::pair<double, double> domain() const;

 private:
  Form form_;
  double coupling_ = 0.0;    // poisson G
  double a_coeff_ = 0.0;     // coulomb_cubed attractive 1/r strength
  double b_coeff_ = 0.0;     // coulomb_cubed 1/r^3 strength
  PchipInterpolator table_;
  double table_lo_ = 0.0, table_hi_ = 0.0;
  std::function<double(double)> closure_;
  double closure_lo_ = 0.0, closure_hi_ = 0.0;
  std::optional<double> closure_zero_;
};

/// Two-column text table (header "# k Vk", whitespace separated, ascending
/// k > 0). Extra leading '#' comment lines are permitted.
FourierSamples load_kernel_table(std::istream& in);
FourierSamples load_kernel_table_file(const std::string& path);
void save_kernel_table(std::ostream& out, const FourierSamples& samples,
                       const std::vector<std::string>& comment_lines = {});

}  // namespace qmlab
