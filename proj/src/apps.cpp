#include "sscc/apps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sscc/error.hpp"
#include "sscc/rng.hpp"

namespace sscc {

AppKind app_kind_from_string(const std::string& name) {
    if (name == "lr") return AppKind::Lr;
    if (name == "svm") return AppKind::Svm;
    if (name == "pagerank") return AppKind::PageRank;
    if (name == "graph_filter") return AppKind::GraphFilter;
    if (name == "hessian") return AppKind::Hessian;
    fail(ErrorKind::InvalidValue, "unknown app '" + name + "'");
}

const char* to_string(AppKind kind) {
    switch (kind) {
    case AppKind::Lr: return "lr";
    case AppKind::Svm: return "svm";
    case AppKind::PageRank: return "pagerank";
    case AppKind::GraphFilter: return "graph_filter";
    case AppKind::Hessian: return "hessian";
    }
    return "?";
}

CodedMatVec::CodedMatVec(const DenseMatrix& a, const GeneratorMatrix& g, std::size_t chunksPerPartition)
    : decoder_(g) {
    cols_ = a.cols();
    auto [plan, blocks] = pad_and_partition(a, g.k, chunksPerPartition);
    plan_ = plan;
    grid_ = chunk_grid(plan_, chunksPerPartition);
    parts_ = mds_encode(blocks, g);
}

DenseVector CodedMatVec::multiply(const DenseVector& x) const {
    // Conventional coded computing: decode each chunk from workers 0..k-1.
    std::vector<std::size_t> allChunks(grid_.chunksPerPartition);
    for (std::size_t c = 0; c < allChunks.size(); ++c) allChunks[c] = c;
    std::vector<std::vector<ChunkResponse>> byChunk(grid_.chunksPerPartition);
    for (std::size_t w = 0; w < decoder_.generator().k; ++w) {
        auto responses = worker_matvec(parts_[w], x, allChunks, grid_);
        for (auto& r : responses) byChunk[r.chunk].push_back(std::move(r));
    }
    std::vector<std::vector<DenseVector>> decoded;
    decoded.reserve(grid_.chunksPerPartition);
    for (const auto& responses : byChunk) decoded.push_back(decoder_.decode_chunk(responses));
    return assemble(decoded, plan_, grid_);
}

DenseVector CodedMatVec::multiply(const DenseVector& x, const Assignment& asg) const {
    if (asg.workers() != parts_.size())
        fail(ErrorKind::LengthMismatch, "assignment covers " + std::to_string(asg.workers()) +
                                            " workers, code has " + std::to_string(parts_.size()));
    if (asg.chunksPerPartition != grid_.chunksPerPartition)
        fail(ErrorKind::DimensionMismatch, "assignment chunk circle differs from the matrix grid");
    std::vector<std::vector<ChunkResponse>> byChunk(grid_.chunksPerPartition);
    for (std::size_t w = 0; w < parts_.size(); ++w) {
        const auto chunks = asg.chunks_of(w);
        if (chunks.empty()) continue;
        auto responses = worker_matvec(parts_[w], x, chunks, grid_);
        for (auto& r : responses) byChunk[r.chunk].push_back(std::move(r));
    }
    std::vector<std::vector<DenseVector>> decoded;
    decoded.reserve(grid_.chunksPerPartition);
    for (const auto& responses : byChunk) decoded.push_back(decoder_.decode_chunk(responses));
    return assemble(decoded, plan_, grid_);
}

namespace {

void check_labels(const LinearOp& a, std::span<const double> y) {
    if (y.size() != a.rows())
        fail(ErrorKind::LengthMismatch, "have " + std::to_string(y.size()) + " labels for " +
                                            std::to_string(a.rows()) + " rows");
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

} // namespace

void lr_step(AppState& state, LinearOp& a, LinearOp& at, std::span<const double> y) {
    check_labels(a, y);
    if (state.w.size() != a.cols())
        fail(ErrorKind::DimensionMismatch, "weight vector does not match feature count");
    const double rows = static_cast<double>(a.rows());
    DenseVector z = a.apply(state.w);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = logistic(z[i]) - y[i];
    const DenseVector g = at.apply(z);
    for (std::size_t j = 0; j < state.w.size(); ++j) state.w[j] -= state.eta * g[j] / rows;
    ++state.iter;
}

double lr_loss(const DenseMatrix& a, std::span<const double> y, const DenseVector& w) {
    const DenseVector z = matvec(a, w);
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) loss += std::log1p(std::exp(z[i])) - y[i] * z[i];
    return loss / static_cast<double>(z.size());
}

void svm_step(AppState& state, LinearOp& a, LinearOp& at, std::span<const double> y) {
    check_labels(a, y);
    if (state.w.size() != a.cols())
        fail(ErrorKind::DimensionMismatch, "weight vector does not match feature count");
    const double rows = static_cast<double>(a.rows());
    DenseVector z = a.apply(state.w);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double margin = y[i] * z[i];
        z[i] = margin < 1.0 ? y[i] : 0.0;
    }
    const DenseVector g = at.apply(z);
    for (std::size_t j = 0; j < state.w.size(); ++j)
        state.w[j] -= state.eta * (state.lambda * state.w[j] - g[j] / rows);
    ++state.iter;
}

void pagerank_step(AppState& state, LinearOp& p) {
    if (state.w.size() != p.cols())
        fail(ErrorKind::DimensionMismatch, "rank vector does not match the link matrix");
    const double n = static_cast<double>(state.w.size());
    DenseVector next = p.apply(state.w);
    double sum = 0.0;
    for (double& v : next) {
        v = state.alpha * v + (1.0 - state.alpha) / n;
        sum += v;
    }
    for (double& v : next) v /= sum;
    state.w = std::move(next);
    ++state.iter;
}

void graph_filter_step(AppState& state, LinearOp& l, std::size_t hops) {
    if (state.w.size() != l.cols())
        fail(ErrorKind::DimensionMismatch, "signal does not match the Laplacian");
    for (std::size_t hop = 0; hop < hops; ++hop) state.w = l.apply(state.w);
    ++state.iter;
}

namespace {

Assignment hessian_assignment(std::size_t productRows, const PolyScheme& scheme, const HessianOptions& opts) {
    const std::size_t m = scheme.recovery_threshold();
    SpeedVector u;
    if (opts.cTarget == 0) {
        u = apportion_speeds(opts.speeds, productRows);
    } else {
        u = apportion_speeds(opts.speeds, opts.cTarget);
    }
    return general_s2c2(u, m);
}

} // namespace

std::vector<std::size_t> hessian_row_loads(std::size_t productRows, const PolyScheme& scheme,
                                           const HessianOptions& opts) {
    const Assignment asg = hessian_assignment(productRows, scheme, opts);
    if (productRows % asg.chunksPerPartition != 0)
        fail(ErrorKind::BadShape, std::to_string(productRows) + " product rows do not divide into " +
                                      std::to_string(asg.chunksPerPartition) + " chunks");
    const std::size_t rowsPerChunk = productRows / asg.chunksPerPartition;
    std::vector<std::size_t> loads(asg.workers());
    for (std::size_t w = 0; w < asg.workers(); ++w) loads[w] = asg.intervals[w].len * rowsPerChunk;
    return loads;
}

DenseMatrix hessian_job(const DenseMatrix& a, const DenseVector& x, const PolyScheme& scheme,
                        const HessianOptions& opts) {
    if (x.size() != a.rows())
        fail(ErrorKind::DimensionMismatch, "diagonal has " + std::to_string(x.size()) + " entries, A has " +
                                               std::to_string(a.rows()) + " rows");
    if (scheme.a != scheme.b)
        fail(ErrorKind::BadShape, "the Hessian layout needs a == b");
    if (a.cols() % scheme.a != 0)
        fail(ErrorKind::BadShape, std::to_string(a.cols()) + " columns do not split into " +
                                      std::to_string(scheme.a) + " blocks");

    const DenseMatrix at = a.transposed();
    const auto leftBlocks = split_rows(at, scheme.a);
    const auto rightBlocks = split_cols(a, scheme.b);
    const auto pairs = poly_encode(leftBlocks, rightBlocks, scheme);
    const std::size_t productRows = a.cols() / scheme.a;
    const PolyComputeMode mode = PolyComputeMode::hessian(x);

    std::vector<RowEvaluation> evals;
    if (opts.useS2c2) {
        const Assignment asg = hessian_assignment(productRows, scheme, opts);
        if (productRows % asg.chunksPerPartition != 0)
            fail(ErrorKind::BadShape, std::to_string(productRows) + " product rows do not divide into " +
                                          std::to_string(asg.chunksPerPartition) + " chunks");
        const ChunkGrid grid{asg.chunksPerPartition, productRows / asg.chunksPerPartition};
        for (std::size_t w = 0; w < scheme.n; ++w) {
            for (const RowRange& range : chunks_to_rows(asg, w, grid)) {
                auto part = poly_worker_compute(pairs[w], range, mode);
                evals.insert(evals.end(), part.begin(), part.end());
            }
        }
    } else {
        for (std::size_t w = 0; w < scheme.n; ++w) {
            auto part = poly_worker_compute(pairs[w], {0, productRows}, mode);
            evals.insert(evals.end(), part.begin(), part.end());
        }
    }

    const auto decodedRows = poly_decode_rows(scheme, evals);
    const auto blocks = poly_blocks_from_rows(decodedRows, scheme, productRows);
    return hessian_assemble(blocks, scheme.a);
}

Dataset make_classification_dataset(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0) fail(ErrorKind::ZeroDimension, "dataset needs positive dimensions");
    Rng rng(seed);
    Dataset ds;
    ds.a = DenseMatrix(rows, cols);
    for (double& v : ds.a.data()) v = rng.normal();
    DenseVector wTrue(cols);
    for (double& v : wTrue) v = rng.uniform(-1.0, 1.0);
    ds.y.resize(rows);
    const DenseVector z = matvec(ds.a, wTrue);
    for (std::size_t i = 0; i < rows; ++i) ds.y[i] = z[i] >= 0.0 ? 1.0 : -1.0;
    return ds;
}

DenseMatrix make_link_matrix(std::size_t nodes, std::uint64_t seed) {
    if (nodes < 2) fail(ErrorKind::ZeroDimension, "link matrix needs at least 2 nodes");
    Rng rng(seed);
    // Out-links per column: one guaranteed link to a random other node plus
    // each remaining node with probability 3/nodes, then column-normalized.
    DenseMatrix p(nodes, nodes);
    const double linkProb = std::min(1.0, 3.0 / static_cast<double>(nodes));
    for (std::size_t from = 0; from < nodes; ++from) {
        std::size_t guaranteed = rng.below(nodes - 1);
        if (guaranteed >= from) ++guaranteed;
        p.at(guaranteed, from) = 1.0;
        for (std::size_t to = 0; to < nodes; ++to) {
            if (to == from || to == guaranteed) continue;
            if (rng.uniform() < linkProb) p.at(to, from) = 1.0;
        }
        double colSum = 0.0;
        for (std::size_t to = 0; to < nodes; ++to) colSum += p.at(to, from);
        for (std::size_t to = 0; to < nodes; ++to) p.at(to, from) /= colSum;
    }
    return p;
}

DenseMatrix make_laplacian(std::size_t nodes, std::uint64_t seed) {
    if (nodes < 2) fail(ErrorKind::ZeroDimension, "Laplacian needs at least 2 nodes");
    Rng rng(seed);
    DenseMatrix l(nodes, nodes);
    const double edgeProb = std::min(1.0, 4.0 / static_cast<double>(nodes));
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = i + 1; j < nodes; ++j) {
            const bool ring = j == i + 1 || (i == 0 && j == nodes - 1); // keep it connected
            if (ring || rng.uniform() < edgeProb) {
                l.at(i, j) = -1.0;
                l.at(j, i) = -1.0;
            }
        }
    }
    for (std::size_t i = 0; i < nodes; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < nodes; ++j)
            if (j != i && l.at(i, j) != 0.0) degree += 1.0;
        l.at(i, i) = degree;
    }
    return l;
}

DenseMatrix make_positive_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0) fail(ErrorKind::ZeroDimension, "matrix needs positive dimensions");
    Rng rng(seed);
    DenseMatrix a(rows, cols);
    for (double& v : a.data()) v = rng.uniform(0.1, 1.1);
    return a;
}

DenseVector make_positive_vector(std::size_t len, std::uint64_t seed) {
    if (len == 0) fail(ErrorKind::ZeroDimension, "vector needs positive length");
    Rng rng(seed, 0x5eed);
    DenseVector v(len);
    for (double& x : v) x = rng.uniform(0.1, 1.1);
    return v;
}

AppState initial_app_state(AppKind kind, const DenseMatrix& a, std::uint64_t seed) {
    AppState state;
    switch (kind) {
    case AppKind::Lr:
    case AppKind::Svm:
        state.w.assign(a.cols(), 0.0);
        break;
    case AppKind::PageRank:
        state.w.assign(a.cols(), 1.0 / static_cast<double>(a.cols()));
        break;
    case AppKind::GraphFilter: {
        Rng rng(seed, 0xf117);
        state.w.resize(a.cols());
        for (double& v : state.w) v = rng.uniform(-1.0, 1.0);
        break;
    }
    case AppKind::Hessian:
        state.w.assign(a.cols() * a.cols(), 0.0);
        break;
    }
    return state;
}

} // namespace sscc
