#include <doctest.h>

#include <random>
#include <sstream>

#include "qmlab/errors.hpp"
#include "qmlab/snapshot.hpp"

using namespace qmlab;

TEST_CASE("snapshot round trip preserves header and field bit-exactly") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);

  const Grid grids[] = {Grid::make_1d(64, 3.5),
                        Grid::make_2d(16, 32, 1.0, 2.0),
                        Grid::make_3d(8, 4.0)};
  for (const Grid& grid : grids) {
    GridState s(grid);
    s.time = 1.25;
    for (auto& v : s.psi.span()) v = {u(rng), u(rng)};

    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    write_snapshot(buf, s);
    const GridState r = read_snapshot(buf);

    CHECK(r.grid == grid);
    CHECK(r.time == s.time);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(r.psi[i] == s.psi[i]);
  }
}

TEST_CASE("snapshot reader rejects corrupt input") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_snapshot(empty), InputError);

  std::stringstream bad(std::ios::in | std::ios::out | std::ios::binary);
  bad << "NOTASNAP garbage";
  CHECK_THROWS_AS(read_snapshot(bad), InputError);

  // Truncated field data.
  const Grid grid = Grid::make_1d(32, 1.0);
  GridState s(grid);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_snapshot(buf, s);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 16);
  std::stringstream cut(bytes, std::ios::in | std::ios::binary);
  CHECK_THROWS_AS(read_snapshot(cut), InputError);
}

TEST_CASE("slice CSV exports the center line") {
  const Grid grid = Grid::make_2d(8, 8, 1.0, 1.0);
  GridState s(grid);
  for (auto& v : s.psi.span()) v = {1.0, -0.5};
  std::stringstream out;
  write_slice_csv(out, s, 0, Provenance{});
  const std::string text = out.str();
  CHECK(text.find("# qmlab") == 0);
  CHECK(text.find("x,re_psi,im_psi,density") != std::string::npos);
  // one row per point along axis 0, plus provenance and header lines
  std::size_t rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == 2 + 8);
}
