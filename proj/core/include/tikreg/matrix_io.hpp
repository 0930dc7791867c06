#pragma once

#include <iosfwd>
#include <string>

#include "tikreg/linalg.hpp"

namespace tikreg {

// Plain text matrix format: a `rows cols` header line followed by the
// entries in row-major order, whitespace separated. Vectors are written as
// a single column. Values use shortest round-trip decimal.

void write_matrix_text(std::ostream& out, const Matrix& m);
Matrix read_matrix_text(std::istream& in);

void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace tikreg
