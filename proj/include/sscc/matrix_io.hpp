#ifndef SSCC_MATRIX_IO_HPP
#define SSCC_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "sscc/matrix.hpp"

namespace sscc {

/// Matrix CSV: one line per row, values separated by commas, no header.
/// Values are written with %.17g so a write/read cycle is bitwise exact.
void write_matrix_csv(std::ostream& out, const DenseMatrix& a);
void write_matrix_csv(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix_csv(std::istream& in, const std::string& context = "<stream>");
DenseMatrix read_matrix_csv(const std::string& path);

/// Matrix binary: 16-byte header of two little-endian uint64 (rows, cols),
/// then rows*cols little-endian float64 in row-major order.
void write_matrix_binary(std::ostream& out, const DenseMatrix& a);
void write_matrix_binary(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix_binary(std::istream& in, const std::string& context = "<stream>");
DenseMatrix read_matrix_binary(const std::string& path);

/// Vectors travel as single-column matrices in either format.
void write_vector_csv(const std::string& path, const DenseVector& v);
DenseVector read_vector_csv(const std::string& path);

/// Shortest round-trippable decimal form of a double (%.17g).
std::string format_double(double value);

} // namespace sscc

#endif
