#include "smv/snpa.hpp"

#include <algorithm>
#include <cmath>

#include "smv/error.hpp"
#include "smv/linalg.hpp"
#include "smv/minvol.hpp"

namespace smv {

DenseMatrix nnls_capped_simplex(const DenseMatrix& w, const DenseMatrix& x,
                                const DenseMatrix& h_init, std::size_t iters, double tol)
{
    for (std::size_t j = 0; j < w.cols(); ++j) {
        bool nonzero = false;
        for (std::size_t i = 0; i < w.rows() && !nonzero; ++i) {
            nonzero = w(i, j) != 0.0;
        }
        if (!nonzero) {
            throw InvalidInput("nnls_capped_simplex: W has an all-zero column");
        }
    }
    return update_H(x, w, h_init, iters, tol);
}

SnpaResult snpa(const DenseMatrix& x, std::size_t r, const SnpaOptions& options)
{
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    if (r == 0 || r > std::min(m, n)) {
        throw InvalidParameter("snpa: rank must satisfy 0 < r <= min(m, n)");
    }
    for (double v : x.values()) {
        if (!(v >= 0.0)) {
            throw InvalidInput("snpa: X must be entrywise nonnegative and finite");
        }
    }

    SnpaResult result;
    std::vector<bool> taken(n, false);
    DenseMatrix residual = x;
    DenseMatrix h;

    for (std::size_t t = 0; t < r; ++t) {
        std::vector<double> score(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            auto ri = residual.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                score[j] += ri[j] * ri[j];
            }
        }
        std::size_t best = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (taken[j]) continue;
            if (best == n || score[j] > score[best]) {
                best = j;
            }
        }
        taken[best] = true;
        result.selected_indices.push_back(best);

        const DenseMatrix w = select_columns(x, result.selected_indices);
        // Warm start: previous coefficients plus a zero row for the new column.
        DenseMatrix h_start(t + 1, n);
        for (std::size_t i = 0; i < t; ++i) {
            std::copy(h.row(i).begin(), h.row(i).end(), h_start.row(i).begin());
        }
        h = update_H(x, w, h_start, options.nnls_iters, options.nnls_tol);
        residual = x - matmul(w, h);
        result.residual_norms.push_back(frobenius_norm(residual));
    }

    result.W0 = select_columns(x, result.selected_indices);
    result.H0 = std::move(h);
    return result;
}

}  // namespace smv
