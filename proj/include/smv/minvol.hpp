#pragma once

#include <cstddef>
#include <vector>

#include "smv/matrix.hpp"

namespace smv {

/// Settings of the noisy min-vol NMF solver
///     min ||X - WH||_F^2 + lambda * log det(W'W + delta I)   over S.
struct MinvolConfig {
    double lambda = 0.0;
    double delta = 0.1;
    std::size_t outer_sweeps = 100;
    std::size_t inner_iters_per_block = 50;
    double tol_rel_obj = 1e-7;
    // Relative step size at which a block's fast gradient loop stops early.
    double inner_tol = 1e-9;

    void validate() const;
};

struct MinvolState {
    DenseMatrix W;
    DenseMatrix H;
    // Objective at the start point, then after every sweep.
    std::vector<double> objective_history;
    std::size_t sweeps = 0;
};

double objective_minvol(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                        double lambda, double delta);

/// Fast projected gradient on H -> ||X - WH||_F^2 over the capped simplex
/// columns. The returned H never has a larger objective than the input one.
DenseMatrix update_H(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                     std::size_t iters, double tol);

/// Fast projected gradient on W -> ||X - WH||_F^2 + lambda_eff * tr(A W'W), W >= 0.
/// A must be symmetric positive definite (it is Q_k^{-1} in the solvers).
DenseMatrix update_W(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                     const DenseMatrix& a, double lambda_eff, std::size_t iters, double tol);

// Unconstrained gradients of the two block objectives above.
DenseMatrix gradient_H(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h);
DenseMatrix gradient_W(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                       const DenseMatrix& a, double lambda_eff);

/**
 * Block coordinate descent for the min-vol objective. Every sweep re-anchors
 * the log det majorizer at the current W (A = (W'W + delta I)^{-1}), takes a W
 * step on the trace surrogate and then an H step. The objective history is
 * non-increasing. Stops when the relative objective change falls below
 * `tol_rel_obj` or the sweep budget runs out.
 *
 * Throws InvalidInput when (W_init, H_init) is not in S or shapes disagree.
 */
MinvolState minvol(const DenseMatrix& x, std::size_t r, const DenseMatrix& w_init,
                   const DenseMatrix& h_init, const MinvolConfig& config);

/// lambda = lambda_tilde * ||X - W0 H0||_F^2 / log det(W0'W0 + delta I).
/// The denominator may be negative and is passed through; |denominator| < 1e-300
/// throws DegenerateDenominator.
double lambda_from_init(const DenseMatrix& x, const DenseMatrix& w0, const DenseMatrix& h0,
                        double lambda_tilde, double delta);

}  // namespace smv
