#include "sscc/matrix.hpp"

#include <string>

#include "sscc/error.hpp"

namespace sscc {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) fail(ErrorKind::ZeroDimension, "matrix must have positive rows and cols");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    if (rows.size() == 0 || rows.begin()->size() == 0)
        fail(ErrorKind::ZeroDimension, "from_rows needs at least one row and column");
    DenseMatrix out(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != out.cols_)
            fail(ErrorKind::BadShape, "ragged rows in from_rows at row " + std::to_string(r));
        std::size_t c = 0;
        for (double v : row) out.at(r, c++) = v;
        ++r;
    }
    return out;
}

DenseMatrix DenseMatrix::slice_rows(RowRange range) const {
    if (range.begin > range.end || range.end > rows_)
        fail(ErrorKind::BadShape, "row slice [" + std::to_string(range.begin) + ", " +
                                      std::to_string(range.end) + ") outside matrix with " +
                                      std::to_string(rows_) + " rows");
    DenseMatrix out(range.size(), cols_);
    for (std::size_t r = 0; r < out.rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(range.begin + r, c);
    return out;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

std::pair<PartitionPlan, std::vector<DenseMatrix>>
pad_and_partition(const DenseMatrix& a, std::size_t k, std::size_t chunksPerPartition) {
    if (k == 0 || chunksPerPartition == 0)
        fail(ErrorKind::ZeroDimension, "partition count and chunk count must be positive");
    const std::size_t quantum = k * chunksPerPartition;
    const std::size_t paddedRows = (a.rows() + quantum - 1) / quantum * quantum;

    PartitionPlan plan;
    plan.originalRows = a.rows();
    plan.k = k;
    plan.paddedRows = paddedRows;
    plan.rowsPerPartition = paddedRows / k;

    std::vector<DenseMatrix> blocks;
    blocks.reserve(k);
    for (std::size_t p = 0; p < k; ++p) {
        DenseMatrix block(plan.rowsPerPartition, a.cols());
        for (std::size_t r = 0; r < plan.rowsPerPartition; ++r) {
            const std::size_t src = p * plan.rowsPerPartition + r;
            if (src >= a.rows()) break; // remaining rows stay zero
            for (std::size_t c = 0; c < a.cols(); ++c) block.at(r, c) = a.at(src, c);
        }
        blocks.push_back(std::move(block));
    }
    return {plan, std::move(blocks)};
}

ChunkGrid chunk_grid(const PartitionPlan& plan, std::size_t chunksPerPartition) {
    if (chunksPerPartition == 0) fail(ErrorKind::ZeroDimension, "chunk count must be positive");
    if (plan.rowsPerPartition % chunksPerPartition != 0)
        fail(ErrorKind::BadShape, "partition of " + std::to_string(plan.rowsPerPartition) +
                                      " rows does not divide into " + std::to_string(chunksPerPartition) +
                                      " chunks");
    return {chunksPerPartition, plan.rowsPerPartition / chunksPerPartition};
}

RowRange chunk_rows(const ChunkGrid& grid, std::size_t chunk) {
    if (chunk >= grid.chunksPerPartition)
        fail(ErrorKind::ChunkOutOfRange, "chunk " + std::to_string(chunk) + " of " +
                                             std::to_string(grid.chunksPerPartition));
    return {chunk * grid.rowsPerChunk, (chunk + 1) * grid.rowsPerChunk};
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
    return matvec_range(a, x, {0, a.rows()});
}

DenseVector matvec_range(const DenseMatrix& a, const DenseVector& x, RowRange range) {
    if (x.size() != a.cols())
        fail(ErrorKind::DimensionMismatch, "matvec: matrix has " + std::to_string(a.cols()) +
                                               " cols, vector has " + std::to_string(x.size()));
    if (range.begin > range.end || range.end > a.rows())
        fail(ErrorKind::BadShape, "matvec range outside matrix");
    DenseVector y(range.size(), 0.0);
    for (std::size_t r = range.begin; r < range.end; ++r) {
        double acc = 0.0;
        const auto row = a.row(r);
        for (std::size_t c = 0; c < a.cols(); ++c) acc += row[c] * x[c];
        y[r - range.begin] = acc;
    }
    return y;
}

std::vector<DenseMatrix> split_rows(const DenseMatrix& a, std::size_t parts) {
    if (parts == 0) fail(ErrorKind::ZeroDimension, "split_rows needs a positive part count");
    if (a.rows() % parts != 0)
        fail(ErrorKind::BadShape, std::to_string(a.rows()) + " rows do not split into " +
                                      std::to_string(parts) + " equal blocks");
    const std::size_t step = a.rows() / parts;
    std::vector<DenseMatrix> out;
    out.reserve(parts);
    for (std::size_t p = 0; p < parts; ++p) out.push_back(a.slice_rows({p * step, (p + 1) * step}));
    return out;
}

std::vector<DenseMatrix> split_cols(const DenseMatrix& b, std::size_t parts) {
    if (parts == 0) fail(ErrorKind::ZeroDimension, "split_cols needs a positive part count");
    if (b.cols() % parts != 0)
        fail(ErrorKind::BadShape, std::to_string(b.cols()) + " cols do not split into " +
                                      std::to_string(parts) + " equal blocks");
    const std::size_t step = b.cols() / parts;
    std::vector<DenseMatrix> out;
    out.reserve(parts);
    for (std::size_t p = 0; p < parts; ++p) {
        DenseMatrix block(b.rows(), step);
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < step; ++c) block.at(r, c) = b.at(r, p * step + c);
        out.push_back(std::move(block));
    }
    return out;
}

} // namespace sscc
