#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmlab {

namespace detail {
void* fft_aligned_alloc(std::size_t bytes);
void fft_aligned_free(void* p);
}  // namespace detail

/// SIMD-aligned buffer compatible with the FFT backend. Move-only;
/// copy explicitly via clone().
template <typename T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  explicit AlignedBuffer(std::size_t n) : size_(n) {
    data_ = static_cast<T*>(detail::fft_aligned_alloc(n * sizeof(T)));
    for (std::size_t i = 0; i < n; ++i) new (data_ + i) T();
  }
  ~AlignedBuffer() { detail::fft_aligned_free(data_); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  AlignedBuffer(AlignedBuffer&& o) noexcept : data_(o.data_), size_(o.size_) {
    o.data_ = nullptr;
    o.size_ = 0;
  }
  AlignedBuffer& operator=(AlignedBuffer&& o) noexcept {
    if (this != &o) {
      detail::fft_aligned_free(data_);
      data_ = o.data_;
      size_ = o.size_;
      o.data_ = nullptr;
      o.size_ = 0;
    }
    return *this;
  }

  AlignedBuffer clone() const {
    AlignedBuffer c(size_);
    for (std::size_t i = 0; i < size_; ++i) c.data_[i] = data_[i];
    return c;
  }

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T* begin() { return data_; }
  T* end() { return data_ + size_; }
  const T* begin() const { return data_; }
  const T* end() const { return data_ + size_; }
  std::span<T> span() { return {data_, size_}; }
  std::span<const T> span() const { return {data_, size_}; }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

/// Periodic uniform grid in 1, 2, or 3 dimensions. Sizes must be powers
/// of two (spectral efficiency). Row-major storage, axis 0 slowest.
struct Grid {
  int dims = 1;
  std::array<std::size_t, 3> shape{{1, 1, 1}};
  std::array<double, 3> box{{1.0, 1.0, 1.0}};

  static Grid make(int dims, std::span<const std::size_t> shape,
                   std::span<const double> box);
  static Grid make_1d(std::size_t n, double length);
  static Grid make_2d(std::size_t nx, std::size_t ny, double lx, double ly);
  static Grid make_3d(std::size_t n, double length);

  std::size_t size() const { return shape[0] * shape[1] * shape[2]; }
  double cell_volume() const;
  double volume() const;
  double spacing(int axis) const {
    return box[axis] / static_cast<double>(shape[axis]);
  }
  double min_spacing() const;

  /// Coordinate of grid point `index` along `axis` (cell-cornered, in
  /// [0, L)).
  double coordinate(int axis, std::size_t index) const {
    return box[axis] * static_cast<double>(index) /
           static_cast<double>(shape[axis]);
  }

  /// Signed spectral wavenumber 2 pi m / L for FFT bin `index`
  /// (m in [-N/2, N/2], Nyquist mapped to +N/2).
  double wavenumber(int axis, std::size_t index) const;

  /// Largest |k| along an axis (pi / dx).
  double k_max(int axis) const;

  bool operator==(const Grid& other) const {
    return dims == other.dims && shape == other.shape && box == other.box;
  }
};

/// Complex wavefunction on a periodic grid at a moment in time.
struct GridState {
  Grid grid;
  AlignedBuffer<std::complex<double>> psi;
  double time = 0.0;

  GridState() = default;
  explicit GridState(const Grid& g) : grid(g), psi(g.size()) {}
  GridState clone() const;

  /// Total particle number sum |psi|^2 dV.
  double norm() const;
};

/// Uniform state psi = sqrt(n0) everywhere.
GridState uniform_state(const Grid& grid, double n0);

}  // namespace qmlab
