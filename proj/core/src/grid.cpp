#include "qmlab/grid.hpp"

#include <cmath>

#include <fftw3.h>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace detail {
void* fft_aligned_alloc(std::size_t bytes) {
  if (bytes == 0) return nullptr;
  void* p = fftw_malloc(bytes);
  if (!p) throw std::bad_alloc();
  return p;
}
void fft_aligned_free(void* p) {
  if (p) fftw_free(p);
}
}  // namespace detail

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid Grid::make(int dims, std::span<const std::size_t> shape,
                std::span<const double> box) {
  if (dims < 1 || dims > 3) throw InvalidParameter("grid dims must be 1..3");
  if (shape.size() != static_cast<std::size_t>(dims) ||
      box.size() != static_cast<std::size_t>(dims))
    throw InvalidParameter("grid shape/box rank mismatch");
  Grid g;
  g.dims = dims;
  for (int a = 0; a < dims; ++a) {
    if (!is_power_of_two(shape[a]) || shape[a] < 2)
      throw InvalidParameter("grid sizes must be powers of two (>= 2)");
    if (!(box[a] > 0.0)) throw InvalidParameter("box lengths must be > 0");
    g.shape[a] = shape[a];
    g.box[a] = box[a];
  }
  return g;
}

Grid Grid::make_1d(std::size_t n, double length) {
  const std::size_t s[1] = {n};
  const double b[1] = {length};
  return make(1, s, b);
}

Grid Grid::make_2d(std::size_t nx, std::size_t ny, double lx, double ly) {
  const std::size_t s[2] = {nx, ny};
  const double b[2] = {lx, ly};
  return make(2, s, b);
}

Grid Grid::make_3d(std::size_t n, double length) {
  const std::size_t s[3] = {n, n, n};
  const double b[3] = {length, length, length};
  return make(3, s, b);
}

double Grid::cell_volume() const {
  double dv = 1.0;
  for (int a = 0; a < dims; ++a) dv *= spacing(a);
  return dv;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dims; ++a) v *= box[a];
  return v;
}

double Grid::min_spacing() const {
  double dx = spacing(0);
  for (int a = 1; a < dims; ++a) dx = std::min(dx, spacing(a));
  return dx;
}

double Grid::wavenumber(int axis, std::size_t index) const {
  const std::size_t n = shape[axis];
  const long m = (index <= n / 2) ? static_cast<long>(index)
                                  : static_cast<long>(index) - static_cast<long>(n);
  return 2.0 * M_PI * static_cast<double>(m) / box[axis];
}

double Grid::k_max(int axis) const {
  return M_PI * static_cast<double>(shape[axis]) / box[axis];
}

GridState GridState::clone() const {
  GridState c;
  c.grid = grid;
  c.psi = psi.clone();
  c.time = time;
  return c;
}

double GridState::norm() const {
  double total = 0.0;
  for (const auto& v : psi.span()) total += std::norm(v);
  return total * grid.cell_volume();
}

GridState uniform_state(const Grid& grid, double n0) {
  if (!(n0 > 0.0)) throw InvalidParameter("uniform_state: n0 must be > 0");
  GridState s(grid);
  const double amp = std::sqrt(n0);
  for (auto& v : s.psi.span()) v = amp;
  return s;
}

}  // namespace qmlab
