#ifndef SSCC_MDS_HPP
#define SSCC_MDS_HPP

#include <map>
#include <memory>
#include <span>

#include "sscc/linalg.hpp"
#include "sscc/matrix.hpp"

namespace sscc {

enum class GeneratorKind { Vandermonde, Custom };

/// Encoding matrix G (n x k) of an (n, k) MDS code over the reals. Every k
/// rows of G must be invertible; that is what makes any k worker responses
/// sufficient to decode.
struct GeneratorMatrix {
    std::size_t n = 0;
    std::size_t k = 0;
    GeneratorKind kind = GeneratorKind::Vandermonde;
    std::vector<double> points; ///< evaluation points (empty for Custom)
    DenseMatrix coeffs;         ///< n x k coefficient rows

    std::span<const double> row(std::size_t i) const { return coeffs.row(i); }
};

/// Chebyshev points cos((2i+1) pi / (2n)): distinct, bounded in (-1, 1), and
/// about as well conditioned as real Vandermonde nodes get. The angles are
/// dealt out in a strided order so that a run of consecutive indices (the
/// fastest k responders, a covering arc of the chunk circle) still lands on
/// points spread across the whole interval.
std::vector<double> chebyshev_points(std::size_t n);

/// Monomial Vandermonde generator g_ij = p_i^j at the given distinct points.
GeneratorMatrix vandermonde_generator(std::size_t n, std::size_t k, std::span<const double> points);

/// Same, at Chebyshev points.
GeneratorMatrix vandermonde_generator(std::size_t n, std::size_t k);

/// Generator with rows g_ij = T_j(p_i), the Chebyshev polynomial basis at
/// Chebyshev points. Spanwise identical to a Vandermonde code (any k rows
/// invertible: a degree k-1 polynomial in the T_j with k roots is zero) but
/// numerically far stronger: subsets whose points cover the interval decode
/// to near machine precision even for k in the tens, where the monomial
/// basis is hopeless. Subsets clustered into a sub-arc still lose digits at
/// a rate exponential in the uncovered arc; no real-valued code avoids that,
/// which is why chebyshev_points() spreads consecutive indices.
GeneratorMatrix chebyshev_basis_generator(std::size_t n, std::size_t k);

/// Arbitrary coefficient rows; the caller vouches for the MDS property.
GeneratorMatrix custom_generator(DenseMatrix coeffs);

/// What worker `workerId` stores: its linear combination of the k source blocks.
struct EncodedPartition {
    std::size_t workerId = 0;
    DenseMatrix data;
};

/// Encoded partition i holds sum_j G(i,j) * blocks[j].
std::vector<EncodedPartition> mds_encode(std::span<const DenseMatrix> blocks, const GeneratorMatrix& g);

/// One chunk's worth of partial matrix-vector product from one worker.
struct ChunkResponse {
    std::size_t workerId = 0;
    std::size_t chunk = 0;
    DenseVector values;
};

/// Computes the requested chunks of part.data * x. Chunks use the grid's
/// partition-local coordinates.
std::vector<ChunkResponse> worker_matvec(const EncodedPartition& part, const DenseVector& x,
                                         std::span<const std::size_t> chunks, const ChunkGrid& grid);

/// Decodes chunks of y = A x from per-worker responses, reusing the LU
/// factorization of each worker subset across chunks and iterations.
class MdsDecoder {
public:
    explicit MdsDecoder(GeneratorMatrix g);

    const GeneratorMatrix& generator() const { return g_; }

    /// Recovers the k source-block chunks from at least k responses for one
    /// chunk. Uses the first k distinct workers in the order given; arrival
    /// order does not affect the result because the subset is solved in
    /// sorted worker order.
    std::vector<DenseVector> decode_chunk(std::span<const ChunkResponse> responses) const;

    std::size_t cache_size() const { return cache_.size(); }
    void clear_cache() { cache_.clear(); }

private:
    GeneratorMatrix g_;
    mutable std::map<std::vector<std::size_t>, std::shared_ptr<LuSolver>> cache_;
};

/// One-shot decode without a cache.
std::vector<DenseVector> mds_decode_chunk(const GeneratorMatrix& g, std::span<const ChunkResponse> responses);

/// Stitches decoded chunks back into y = A x (padding rows dropped).
/// decodedChunks[c] holds the k source-block chunks of chunk c.
DenseVector assemble(std::span<const std::vector<DenseVector>> decodedChunks, const PartitionPlan& plan,
                     const ChunkGrid& grid);

} // namespace sscc

#endif
