#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "smv/matrix.hpp"

namespace smv {

/// ||X* - W_hat H_hat||_F / ||X*||_F. Throws UndefinedMetric when X* is zero.
double rel_rmse_X(const DenseMatrix& x_star, const DenseMatrix& w_hat, const DenseMatrix& h_hat);

struct AlignmentResult {
    // permutation[t] is the column of W_hat matched to column t of W*.
    std::vector<std::size_t> permutation;
    DenseMatrix aligned_W_hat;
    // sum_t ||W_hat(:, permutation[t]) - W*(:, t)||^2
    double cost = 0.0;
};

/// Minimum-cost column matching (Hungarian method, O(r^3)) on squared
/// Euclidean column distances. Only permutations are undone, never scaling.
AlignmentResult align_columns(const DenseMatrix& w_star, const DenseMatrix& w_hat);

/// ||W* - aligned(W_hat)||_F / ||W*||_F.
double rel_rmse_W(const DenseMatrix& w_star, const DenseMatrix& w_hat);

struct Pca2d {
    std::vector<double> mean_column;
    std::array<std::vector<double>, 2> basis;
    // Top two eigenvalues of the column covariance and its trace.
    std::array<double, 2> variances{};
    double total_variance = 0.0;
    // 2 x n coordinates of the fitted columns.
    DenseMatrix projected_points;
    // 2 x k coordinates for every overlay, in the order given.
    std::vector<DenseMatrix> projected_overlays;

    double captured_variance_ratio() const
    {
        return total_variance > 0.0 ? (variances[0] + variances[1]) / total_variance : 1.0;
    }
};

/**
 * Fits a two-dimensional principal subspace to the columns of `points` and
 * projects them, plus every overlay column set, onto it. Overlays are centred
 * with the mean of `points`. Each basis vector is signed so that its
 * largest-magnitude entry is positive.
 *
 * Throws InvalidInput with fewer than 2 columns, fewer than 2 rows, or an
 * overlay whose row count differs from `points`.
 */
Pca2d pca_2d(const DenseMatrix& points, const std::vector<DenseMatrix>& overlays = {});

/// CSV `set,index,pc1,pc2`; the fitted columns are written under `points_label`,
/// overlay k under overlay_labels[k].
void write_pca_csv(std::ostream& os, const Pca2d& pca, const std::string& points_label,
                   const std::vector<std::string>& overlay_labels);

}  // namespace smv
