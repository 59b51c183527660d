#pragma once

#include <iosfwd>
#include <string>

#include "qmlab/grid.hpp"
#include "qmlab/provenance.hpp"

namespace qmlab {

/// Flat binary field container:
///   magic "QMLSNAP1" | u32 endian tag 0x01020304 | u32 dims |
///   u64 shape[dims] | f64 box[dims] | f64 time |
///   interleaved complex<f64> data (re, im), row-major.
void write_snapshot(std::ostream& out, const GridState& state);
void write_snapshot_file(const std::string& path, const GridState& state);

GridState read_snapshot(std::istream& in);
GridState read_snapshot_file(const std::string& path);

/// CSV of the 1-d line through the box center along `axis`:
/// columns x, re_psi, im_psi, density.
void write_slice_csv(std::ostream& out, const GridState& state, int axis,
                     const Provenance& prov);

}  // namespace qmlab
