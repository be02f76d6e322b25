#ifndef SSCC_APPS_HPP
#define SSCC_APPS_HPP

#include <cstdint>
#include <span>
#include <string>

#include "sscc/matrix.hpp"
#include "sscc/mds.hpp"
#include "sscc/poly.hpp"
#include "sscc/scheduler.hpp"

namespace sscc {

enum class AppKind { Lr, Svm, PageRank, GraphFilter, Hessian };

AppKind app_kind_from_string(const std::string& name);
const char* to_string(AppKind kind);

/// Where an app's matrix-vector products come from. Implementations range
/// from a plain in-memory multiply (the oracle) to fully simulated coded
/// clusters; app steps cannot tell them apart, which is the point.
class LinearOp {
public:
    virtual ~LinearOp() = default;
    virtual std::size_t rows() const = 0;
    virtual std::size_t cols() const = 0;
    virtual DenseVector apply(const DenseVector& x) = 0;
};

/// The uncoded oracle: y = A x directly.
class PlainOp : public LinearOp {
public:
    explicit PlainOp(const DenseMatrix& a) : a_(&a) {}
    std::size_t rows() const override { return a_->rows(); }
    std::size_t cols() const override { return a_->cols(); }
    DenseVector apply(const DenseVector& x) override { return matvec(*a_, x); }

private:
    const DenseMatrix* a_;
};

/// An MDS-coded matrix held in one place: encode once, multiply many times.
/// multiply() with no assignment decodes from workers 0..k-1 (conventional
/// coded computing); with an assignment it computes exactly the assigned
/// chunks per worker and decodes every chunk from its m covering responses.
class CodedMatVec {
public:
    CodedMatVec(const DenseMatrix& a, const GeneratorMatrix& g, std::size_t chunksPerPartition);

    const PartitionPlan& plan() const { return plan_; }
    const ChunkGrid& grid() const { return grid_; }
    const GeneratorMatrix& generator() const { return decoder_.generator(); }
    std::size_t original_cols() const { return cols_; }
    const EncodedPartition& partition(std::size_t worker) const { return parts_.at(worker); }
    const MdsDecoder& decoder() const { return decoder_; }

    DenseVector multiply(const DenseVector& x) const;
    DenseVector multiply(const DenseVector& x, const Assignment& asg) const;

private:
    PartitionPlan plan_;
    ChunkGrid grid_;
    std::size_t cols_ = 0;
    std::vector<EncodedPartition> parts_;
    MdsDecoder decoder_;
};

/// LinearOp over a CodedMatVec, optionally pinned to a fixed assignment.
class CodedOp : public LinearOp {
public:
    explicit CodedOp(const CodedMatVec& coded) : coded_(&coded) {}
    CodedOp(const CodedMatVec& coded, Assignment asg) : coded_(&coded), asg_(std::move(asg)), useAsg_(true) {}

    std::size_t rows() const override { return coded_->plan().originalRows; }
    std::size_t cols() const override { return coded_->original_cols(); }
    DenseVector apply(const DenseVector& x) override {
        return useAsg_ ? coded_->multiply(x, asg_) : coded_->multiply(x);
    }

private:
    const CodedMatVec* coded_;
    Assignment asg_;
    bool useAsg_ = false;
};

struct Dataset {
    DenseMatrix a;
    std::vector<double> y; ///< labels in {-1, +1}; empty for label-free apps
};

struct AppState {
    DenseVector w; ///< weights / rank vector / signal / flattened Hessian
    std::size_t iter = 0;
    double eta = 0.1;     ///< LR/SVM learning rate
    double lambda = 0.01; ///< SVM regularization
    double alpha = 0.85;  ///< PageRank damping
};

/// One gradient-descent step on the logistic objective
/// mean(log(1 + e^z) - y z): z = A w, g = (1/D) A^T (sigma(z) - y).
void lr_step(AppState& state, LinearOp& a, LinearOp& at, std::span<const double> y);

/// Matching loss for the sanity property that lr_step decreases it.
double lr_loss(const DenseMatrix& a, std::span<const double> y, const DenseVector& w);

/// Hinge subgradient step: g = lambda w - (1/D) A^T (y . [y.(Aw) < 1]).
void svm_step(AppState& state, LinearOp& a, LinearOp& at, std::span<const double> y);

/// x <- alpha P x + (1 - alpha)/N, renormalized to sum 1.
void pagerank_step(AppState& state, LinearOp& p);

/// x <- L^hops x.
void graph_filter_step(AppState& state, LinearOp& l, std::size_t hops);

/// Options for running the full polynomial-code Hessian pipeline.
struct HessianOptions {
    bool useS2c2 = false;
    std::vector<double> speeds; ///< raw speeds, quantized internally
    std::size_t cTarget = 0;    ///< 0 = one chunk per product row
};

/// A^T diag(x) A end to end: split, poly_encode, per-worker compute (full
/// rows, or the S2C2 assignment's rows), decode every row, assemble.
DenseMatrix hessian_job(const DenseMatrix& a, const DenseVector& x, const PolyScheme& scheme,
                        const HessianOptions& opts = {});

/// Row loads of the S2C2 assignment a hessian_job would use (diagnostics).
std::vector<std::size_t> hessian_row_loads(std::size_t productRows, const PolyScheme& scheme,
                                           const HessianOptions& opts);

/// Seeded synthetic data. Classification draws Gaussian features and labels
/// sign(A w*); the graph generators use only uniform draws.
Dataset make_classification_dataset(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Column-stochastic link matrix of a random graph (every node links out).
DenseMatrix make_link_matrix(std::size_t nodes, std::uint64_t seed);

/// Combinatorial Laplacian L = Deg - Adj of a random undirected graph.
DenseMatrix make_laplacian(std::size_t nodes, std::uint64_t seed);

/// Strictly positive matrix / vector (uniform draws), for Hessian inputs.
DenseMatrix make_positive_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
DenseVector make_positive_vector(std::size_t len, std::uint64_t seed);

/// Initial app state for a dataset: zero weights for LR/SVM, uniform rank
/// for PageRank, seeded signal for graph filtering.
AppState initial_app_state(AppKind kind, const DenseMatrix& a, std::uint64_t seed);

} // namespace sscc

#endif
