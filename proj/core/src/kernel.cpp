#include "qmlab/kernel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qmlab/errors.hpp"

namespace qmlab {

InteractionKernel InteractionKernel::poisson(double coupling) {
  InteractionKernel k;
  k.form_ = Form::poisson;
  k.coupling_ = coupling;
  return k;
}

InteractionKernel InteractionKernel::coulomb_cubed(double a_coeff,
                                                   double b_coeff) {
  InteractionKernel k;
  k.form_ = Form::coulomb_cubed;
  k.a_coeff_ = a_coeff;
  k.b_coeff_ = b_coeff;
  return k;
}

InteractionKernel InteractionKernel::custom_table(FourierSamples samples) {
  if (samples.k.size() < 2)
    throw InputError("kernel table needs at least 2 samples");
  if (samples.k.front() <= 0.0)
    throw InputError("kernel table wavenumbers must be > 0");
  InteractionKernel k;
  k.form_ = Form::custom_table;
  k.table_lo_ = samples.k.front();
  k.table_hi_ = samples.k.back();
  k.table_ = PchipInterpolator(std::move(samples.k), std::move(samples.vk));
  return k;
}

InteractionKernel InteractionKernel::custom_closure(
    std::function<double(double)> vk, double k_lo, double k_hi,
    std::optional<double> vk_at_zero) {
  if (!vk) throw InputError("custom kernel closure is empty");
  InteractionKernel k;
  k.form_ = Form::custom_closure;
  k.closure_ = std::move(vk);
  k.closure_lo_ = k_lo;
  k.closure_hi_ = k_hi;
  k.closure_zero_ = vk_at_zero;
  return k;
}

double InteractionKernel::fourier(double k) const {
  if (!(k > 0.0))
    throw DomainError("kernel Fourier transform requires k > 0 (got " +
                      format_sci(k) + ")");
  switch (form_) {
    case Form::none:
      return 0.0;
    case Form::poisson:
      return 4.0 * M_PI * coupling_ / (k * k);
    case Form::coulomb_cubed:
      return -4.0 * M_PI * a_coeff_ / (k * k) + 2.0 * M_PI * b_coeff_;
    case Form::custom_table:
      return table_(k);  // throws InputError outside the sampled range
    case Form::custom_closure:
      if (k < closure_lo_ || (closure_hi_ > 0.0 && k > closure_hi_))
        throw InputError("kernel closure evaluated outside its domain");
      return closure_(k);
  }
  throw Error("unreachable kernel form");
}

std::optional<double> InteractionKernel::fourier_at_zero() const {
  if (form_ == Form::none) return 0.0;
  if (form_ == Form::custom_closure) return closure_zero_;
  return std::nullopt;
}

std::pair<double, double> InteractionKernel::domain() const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (form_) {
    case Form::custom_table:
      return {table_lo_, table_hi_};
    case Form::custom_closure:
      return {closure_lo_, closure_hi_ > 0.0 ? closure_hi_ : inf};
    default:
      return {0.0, inf};
  }
}

FourierSamples load_kernel_table(std::istream& in) {
  FourierSamples out;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      saw_header = true;
      continue;
    }
    std::istringstream row(line);
    double k, vk;
    if (!(row >> k >> vk))
      throw InputError("kernel table: malformed row '" + line + "'");
    if (k <= 0.0) throw InputError("kernel table: k must be > 0");
    if (!out.k.empty() && k <= out.k.back())
      throw InputError("kernel table: k must be strictly ascending");
    out.k.push_back(k);
    out.vk.push_back(vk);
  }
  if (!saw_header)
    throw InputError("kernel table: missing '# k Vk' header line");
  if (out.k.size() < 2) throw InputError("kernel table: needs >= 2 rows");
  return out;
}

FourierSamples load_kernel_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open kernel table file: " + path);
  return load_kernel_table(f);
}

void save_kernel_table(std::ostream& out, const FourierSamples& samples,
                       const std::vector<std::string>& comment_lines) {
  for (const auto& c : comment_lines) out << "# " << c << "\n";
  out << "# k Vk\n";
  for (std::size_t i = 0; i < samples.k.size(); ++i)
    out << format_sci(samples.k[i]) << " " << format_sci(samples.vk[i]) << "\n";
}

}  // namespace qmlab
