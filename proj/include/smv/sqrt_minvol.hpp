#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "smv/error.hpp"
#include "smv/matrix.hpp"
#include "smv/minvol.hpp"

namespace smv {

/// How the effective inner penalty lambda_k is formed at outer iteration k.
enum class LambdaSchedule {
    // lambda_k = 2 * lambda * sqrt(r_k): the weight that turns the min-vol
    // subproblem into a majorizer of f_eps, so f_eps descends monotonically.
    scaled,
    // lambda_1 = lambda, lambda_{k+1} = 2 * sqrt(r_{k+1}) * lambda_k: the
    // previous value is rescaled every iteration. Not an MM scheme for a fixed
    // f_eps; kept for comparison runs.
    compounding,
};

struct SqrtConfig {
    double lambda = 1.0;
    double delta = 0.1;
    double epsilon = 0.1;
    std::size_t max_outer = 200;
    double tol_rel_f = 1e-9;
    LambdaSchedule schedule = LambdaSchedule::scaled;
    // Budget of each inner min-vol call; its lambda is overwritten by lambda_k.
    MinvolConfig inner = default_inner();

    static MinvolConfig default_inner()
    {
        MinvolConfig c;
        c.outer_sweeps = 20;
        return c;
    }

    void validate() const;
};

/// Ground truth used only to fill the rel-RMSE columns of the trace.
struct GroundTruthRef {
    DenseMatrix W_star;
    DenseMatrix X_star;
};

struct TraceRow {
    std::size_t k = 0;
    double f_eps = 0.0;
    double r_k = 0.0;
    double lambda_k = 0.0;
    double sigma_hat = 0.0;
    std::optional<double> rel_rmse_X;
    std::optional<double> rel_rmse_W;
    double wall_ms = 0.0;
};

struct SolveTrace {
    std::vector<TraceRow> rows;

    static constexpr const char* csv_header =
        "k,f_eps,r_k,lambda_k,sigma_hat,rel_rmse_X,rel_rmse_W,wall_ms";
    void write_csv(std::ostream& os) const;
};

struct FactorPair {
    DenseMatrix W;
    DenseMatrix H;
    std::size_t rank() const { return W.cols(); }
};

struct SqrtResult {
    FactorPair factors;
    SolveTrace trace;
    std::size_t outer_iterations = 0;
    bool converged = false;
};

/// NumericalFault raised from sqrt_minvol; carries the trace recorded so far.
class SolveFault : public NumericalFault {
public:
    SolveFault(const std::string& what, SolveTrace trace)
        : NumericalFault(what), trace_(std::move(trace))
    {
    }
    const SolveTrace& trace() const { return trace_; }

private:
    SolveTrace trace_;
};

/// sqrt(||X - WH||_F^2 + epsilon) + lambda * log det(W'W + delta I)
double f_eps(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h, double lambda,
             double delta, double epsilon);

/// ||X - WH||_F^2 + epsilon
double residual_r(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                  double epsilon);

/// 2 * lambda * sqrt(r_k)
double lambda_k(double r_k, double lambda);

/// sqrt(residual_r) / (m n): the per-iterate noise-level reading.
double sigma_hat(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                 double epsilon);

/**
 * Majorizer of f_eps anchored at (W_k, H_k): the square root replaced by its
 * tangent line at r_k and log det(Q) by its tangent at Q_k,
 *
 *   sqrt(r_k) + (||X - WH||^2 + eps - r_k) / (2 sqrt(r_k))
 *     + lambda * [log det Q_k + tr(Q_k^{-1} (Q - Q_k))].
 *
 * Equal to f_eps at the anchor and no smaller anywhere else.
 */
double surrogate_g(const DenseMatrix& w, const DenseMatrix& h, const DenseMatrix& w_k,
                   const DenseMatrix& h_k, const DenseMatrix& x, double lambda, double delta,
                   double epsilon);

/// Unconstrained gradient of f_eps: returns {grad_W, grad_H}.
FactorPair gradient_f_eps(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                          double lambda, double delta, double epsilon);

/// ||theta - P_S(theta - grad f_eps(theta))||_F, zero exactly at first-order
/// stationary points of f_eps over S.
double projected_gradient_norm(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                               double lambda, double delta, double epsilon);

/**
 * Square-root min-vol NMF. Initializes with SNPA, then for k = 1, 2, ...
 * evaluates r_k, forms lambda_k, and runs a warm-started min-vol solve with
 * penalty lambda_k. Stops once the relative change of f_eps drops below
 * tol_rel_f or after max_outer iterations. The trace holds one row per
 * iterate, the last row describing the returned factors.
 */
SqrtResult sqrt_minvol(const DenseMatrix& x, std::size_t r, const SqrtConfig& config,
                       const std::optional<GroundTruthRef>& ground_truth = std::nullopt);

/// Same loop from a caller-supplied feasible start instead of SNPA.
SqrtResult sqrt_minvol_from(const DenseMatrix& x, const DenseMatrix& w_init,
                            const DenseMatrix& h_init, const SqrtConfig& config,
                            const std::optional<GroundTruthRef>& ground_truth = std::nullopt);

}  // namespace smv
