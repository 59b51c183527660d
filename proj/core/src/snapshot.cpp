#include "qmlab/snapshot.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include "qmlab/errors.hpp"
#include "qmlab/numerics.hpp"

namespace qmlab {

namespace {
constexpr char kMagic[8] = {'Q', 'M', 'L', 'S', 'N', 'A', 'P', '1'};
constexpr std::uint32_t kEndianTag = 0x01020304u;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("snapshot: truncated stream");
  return v;
}
}  // namespace

void write_snapshot(std::ostream& out, const GridState& state) {
  out.write(kMagic, sizeof(kMagic));
  put(out, kEndianTag);
  put(out, static_cast<std::uint32_t>(state.grid.dims));
  for (int a = 0; a < state.grid.dims; ++a)
    put(out, static_cast<std::uint64_t>(state.grid.shape[a]));
  for (int a = 0; a < state.grid.dims; ++a) put(out, state.grid.box[a]);
  put(out, state.time);
  out.write(reinterpret_cast<const char*>(state.psi.data()),
            static_cast<std::streamsize>(state.psi.size() *
                                         sizeof(std::complex<double>)));
  if (!out) throw InputError("snapshot: write failed");
}

void write_snapshot_file(const std::string& path, const GridState& state) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open snapshot file for writing: " + path);
  write_snapshot(f, state);
}

GridState read_snapshot(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw InputError("snapshot: bad magic");
  if (get<std::uint32_t>(in) != kEndianTag)
    throw InputError("snapshot: endianness mismatch");
  const auto dims = get<std::uint32_t>(in);
  if (dims < 1 || dims > 3) throw InputError("snapshot: bad rank");
  std::array<std::size_t, 3> shape{{1, 1, 1}};
  std::array<double, 3> box{{1.0, 1.0, 1.0}};
  for (std::uint32_t a = 0; a < dims; ++a)
    shape[a] = static_cast<std::size_t>(get<std::uint64_t>(in));
  for (std::uint32_t a = 0; a < dims; ++a) box[a] = get<double>(in);
  const double time = get<double>(in);

  const Grid grid = Grid::make(
      static_cast<int>(dims),
      std::span<const std::size_t>(shape.data(), dims),
      std::span<const double>(box.data(), dims));
  GridState state(grid);
  state.time = time;
  in.read(reinterpret_cast<char*>(state.psi.data()),
          static_cast<std::streamsize>(state.psi.size() *
                                       sizeof(std::complex<double>)));
  if (!in) throw InputError("snapshot: truncated field data");
  return state;
}

GridState read_snapshot_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open snapshot file: " + path);
  return read_snapshot(f);
}

void write_slice_csv(std::ostream& out, const GridState& state, int axis,
                     const Provenance& prov) {
  const Grid& g = state.grid;
  if (axis < 0 || axis >= g.dims) throw InputError("slice: bad axis");
  out << prov.comment_line() << "\n";
  out << "x,re_psi,im_psi,density\n";
  std::array<std::size_t, 3> at{{0, 0, 0}};
  for (int a = 0; a < g.dims; ++a)
    if (a != axis) at[a] = g.shape[a] / 2;
  for (std::size_t i = 0; i < g.shape[axis]; ++i) {
    at[axis] = i;
    const std::size_t idx =
        (at[0] * g.shape[1] + at[1]) * g.shape[2] + at[2];
    const auto v = state.psi[idx];
    out << format_sci(g.coordinate(axis, i)) << "," << format_sci(v.real())
        << "," << format_sci(v.imag()) << "," << format_sci(std::norm(v))
        << "\n";
  }
}

}  // namespace qmlab
