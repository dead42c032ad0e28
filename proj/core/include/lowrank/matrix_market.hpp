#pragma once

#include <iosfwd>
#include <string>

#include "lowrank/matrix.hpp"

namespace lowrank {

// MatrixMarket dense ("array") and sparse ("coordinate") exchange format.
// Reading accepts real/integer entries, general or symmetric symmetry, and
// pattern coordinate files (entries default to 1). Writing emits "real
// general" with round-trip-exact doubles. Malformed input throws IoError.

Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market_file(const std::string& path);

// Dense array format; entries listed in column-major order as the format
// requires.
void write_matrix_market_array(std::ostream& out, const Matrix& a);
void write_matrix_market_array_file(const std::string& path, const Matrix& a);

// Coordinate format listing entries with |value| > 0 (1-based indices).
void write_matrix_market_coordinate(std::ostream& out, const Matrix& a);
void write_matrix_market_coordinate_file(const std::string& path,
                                         const Matrix& a);

// Shared formatting helper: shortest decimal string that parses back to
// exactly the same double. Used by every CSV/file writer so that reruns
// are byte-identical.
std::string format_double(double x);

}  // namespace lowrank
