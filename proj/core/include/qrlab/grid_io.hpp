#pragma once

#include <iosfwd>
#include <string>

#include "qrlab/grid.hpp"

namespace qrlab {

/// CSV layout: first line "# " followed by a JSON header with fields dim, n,
/// half_width, domain_tag; then a header row "i0[,i1[,i2]],re,im" and one row
/// per lattice point in row-major order. Floats use 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f);
GridFunction read_csv(std::istream& in);

/// Binary layout: 8-byte little-endian header length, the JSON header, then
/// n^d pairs of IEEE doubles (re, im) in row-major order.
void write_binary(std::ostream& out, const GridFunction& f);
GridFunction read_binary(std::istream& in);

void save(const std::string& path, const GridFunction& f);
GridFunction load(const std::string& path);

}  // namespace qrlab
