#ifndef SSCC_MATRIX_HPP
#define SSCC_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sscc {

using DenseVector = std::vector<double>;

/// Half-open row interval [begin, end) in some row coordinate system.
struct RowRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const RowRange&) const = default;
};

/// Row-major dense matrix of doubles. Deliberately minimal: the library only
/// needs storage, row views and matrix-vector products; anything fancier
/// (factorizations) lives in linalg.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Convenience for literals in tests: from_rows({{1,2},{3,4}}).
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Rows [range.begin, range.end) as a new matrix.
    DenseMatrix slice_rows(RowRange range) const;

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// How an input matrix was padded and split into k equal row-blocks.
struct PartitionPlan {
    std::size_t originalRows = 0;
    std::size_t k = 0;
    std::size_t paddedRows = 0;
    std::size_t rowsPerPartition = 0;
};

/// Uniform subdivision of every partition into C chunks of equal row count.
struct ChunkGrid {
    std::size_t chunksPerPartition = 0;
    std::size_t rowsPerChunk = 0;
};

/// Pads A with zero rows up to the next multiple of k*C and splits it into k
/// consecutive row-blocks. C is the chunk count each partition will later be
/// divided into; passing C=1 gives plain k-way partitioning.
std::pair<PartitionPlan, std::vector<DenseMatrix>>
pad_and_partition(const DenseMatrix& a, std::size_t k, std::size_t chunksPerPartition);

/// Chunk grid implied by a plan: rowsPerChunk = rowsPerPartition / C.
ChunkGrid chunk_grid(const PartitionPlan& plan, std::size_t chunksPerPartition);

/// Partition-local row interval of one chunk.
RowRange chunk_rows(const ChunkGrid& grid, std::size_t chunk);

/// y = A x.
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);

/// Rows [range.begin, range.end) of A x, as a contiguous vector of range.size() values.
DenseVector matvec_range(const DenseMatrix& a, const DenseVector& x, RowRange range);

/// Splits A into `parts` equal row-blocks (rows must divide evenly).
std::vector<DenseMatrix> split_rows(const DenseMatrix& a, std::size_t parts);

/// Splits B into `parts` equal column-blocks (cols must divide evenly).
std::vector<DenseMatrix> split_cols(const DenseMatrix& b, std::size_t parts);

} // namespace sscc

#endif
