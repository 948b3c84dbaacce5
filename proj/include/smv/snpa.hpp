#pragma once

#include <cstddef>
#include <vector>

#include "smv/matrix.hpp"

namespace smv {

struct SnpaOptions {
    std::size_t nnls_iters = 500;
    double nnls_tol = 1e-10;
};

struct SnpaResult {
    std::vector<std::size_t> selected_indices;
    DenseMatrix W0;  // X(:, selected_indices)
    DenseMatrix H0;  // capped-simplex coefficients
    // ||X - W0 H0||_F after each selection.
    std::vector<double> residual_norms;
};

/// min ||X - WH||_F^2 with every column of H in the capped simplex, by fast
/// projected gradient started from `h_init`. Throws InvalidInput if W has an
/// all-zero column or the shapes disagree.
DenseMatrix nnls_capped_simplex(const DenseMatrix& w, const DenseMatrix& x,
                                const DenseMatrix& h_init, std::size_t iters = 500,
                                double tol = 1e-10);

/**
 * Successive nonnegative projection: r greedy steps, each picking the column
 * with the largest residual l2 norm (ties go to the lowest index; columns
 * already chosen are skipped), appending it to W0 and refitting all of H0 on
 * the capped simplex. The refit is warm-started from the previous H0, so the
 * residual history is non-increasing.
 *
 * Throws InvalidParameter unless 0 < r <= min(m, n), InvalidInput if X has a
 * negative entry.
 */
SnpaResult snpa(const DenseMatrix& x, std::size_t r, const SnpaOptions& options = {});

}  // namespace smv
