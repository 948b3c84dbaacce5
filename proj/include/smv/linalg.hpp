#pragma once

#include <cstddef>

#include "smv/matrix.hpp"

namespace smv {

/// Lower-triangular Cholesky factor L with L * L' = Q. Diagonal strictly positive.
class SpdFactor {
public:
    std::size_t dimension() const { return lower_.rows(); }
    const DenseMatrix& lower() const { return lower_; }

private:
    explicit SpdFactor(DenseMatrix lower) : lower_(std::move(lower)) {}
    friend SpdFactor cholesky(const DenseMatrix& q);

    DenseMatrix lower_;
};

/// sqrt of the sum of squared entries. Throws InvalidInput on a non-finite entry.
double frobenius_norm(const DenseMatrix& m);

/// ||M||_F^2 without the square root.
double squared_norm(const DenseMatrix& m);

/// W'W + delta I. delta must be strictly positive.
DenseMatrix gram_shifted(const DenseMatrix& w, double delta);

/// Throws NotPositiveDefinite on the first non-positive pivot; the caller decides
/// what a failure means, nothing here regularizes.
SpdFactor cholesky(const DenseMatrix& q);

/// 2 * sum(log L_ii).
double logdet_spd(const DenseMatrix& q);
double logdet(const SpdFactor& f);

/// Y with Q Y = B, by forward then backward substitution.
DenseMatrix solve_spd(const SpdFactor& f, const DenseMatrix& b);

/// Q^{-1} for a symmetric positive definite Q.
DenseMatrix inverse_spd(const DenseMatrix& q);

/**
 * Largest singular value by power iteration on M'M (or MM', whichever is
 * smaller). Starts from the normalized all-ones vector and stops once the
 * relative change of the estimate drops below `tol` or `max_iters` is hit.
 * A zero matrix yields 0.
 */
double spectral_norm(const DenseMatrix& m, double tol = 1e-10, std::size_t max_iters = 10000);

}  // namespace smv
