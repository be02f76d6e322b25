#include "sscc/matrix_io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "sscc/error.hpp"

namespace sscc {
namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64_le(std::istream& in, const std::string& context) {
    std::array<unsigned char, 8> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), 8))
        fail(ErrorKind::Io, "truncated header in " + context);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f64_le(std::ostream& out, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64_le(out, v);
}

double get_f64_le(std::istream& in, const std::string& context) {
    const std::uint64_t v = get_u64_le(in, context);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) fail(ErrorKind::Io, "cannot open " + path + " for reading");
    return in;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& a) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (c) out << ',';
            out << format_double(a.at(r, c));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::string& path, const DenseMatrix& a) {
    auto out = open_out(path, std::ios::out);
    write_matrix_csv(out, a);
    if (!out) fail(ErrorKind::Io, "failed writing " + path);
}

DenseMatrix read_matrix_csv(std::istream& in, const std::string& context) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                fail(ErrorKind::Io, context + ":" + std::to_string(lineNo) + ": bad number '" + cell + "'");
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorKind::Io, context + ":" + std::to_string(lineNo) + ": ragged row (" +
                                    std::to_string(row.size()) + " vs " + std::to_string(rows.front().size()) + " values)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorKind::Io, context + ": empty matrix");
    DenseMatrix a(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) a.at(r, c) = rows[r][c];
    return a;
}

DenseMatrix read_matrix_csv(const std::string& path) {
    auto in = open_in(path, std::ios::in);
    return read_matrix_csv(in, path);
}

void write_matrix_binary(std::ostream& out, const DenseMatrix& a) {
    put_u64_le(out, a.rows());
    put_u64_le(out, a.cols());
    for (double v : a.data()) put_f64_le(out, v);
}

void write_matrix_binary(const std::string& path, const DenseMatrix& a) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    write_matrix_binary(out, a);
    if (!out) fail(ErrorKind::Io, "failed writing " + path);
}

DenseMatrix read_matrix_binary(std::istream& in, const std::string& context) {
    const std::uint64_t rows = get_u64_le(in, context);
    const std::uint64_t cols = get_u64_le(in, context);
    if (rows == 0 || cols == 0) fail(ErrorKind::Io, context + ": zero dimension in header");
    if (rows > (1ull << 32) || cols > (1ull << 32)) fail(ErrorKind::Io, context + ": implausible header");
    DenseMatrix a(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (double& v : a.data()) v = get_f64_le(in, context);
    return a;
}

DenseMatrix read_matrix_binary(const std::string& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    return read_matrix_binary(in, path);
}

void write_vector_csv(const std::string& path, const DenseVector& v) {
    DenseMatrix column(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) column.at(i, 0) = v[i];
    write_matrix_csv(path, column);
}

DenseVector read_vector_csv(const std::string& path) {
    const DenseMatrix m = read_matrix_csv(path);
    if (m.cols() != 1) fail(ErrorKind::Io, path + ": expected a single-column vector, got " +
                                               std::to_string(m.cols()) + " columns");
    DenseVector v(m.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.at(i, 0);
    return v;
}

} // namespace sscc
