#include "smv/metrics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "smv/error.hpp"
#include "smv/linalg.hpp"

namespace smv {

double rel_rmse_X(const DenseMatrix& x_star, const DenseMatrix& w_hat, const DenseMatrix& h_hat)
{
    const double denom = frobenius_norm(x_star);
    if (denom == 0.0) {
        throw UndefinedMetric("rel_rmse_X: ||X*||_F is zero");
    }
    const DenseMatrix x_hat = matmul(w_hat, h_hat);
    if (!x_hat.same_shape(x_star)) {
        throw InvalidInput("rel_rmse_X: W_hat H_hat does not match the shape of X*");
    }
    return frobenius_norm(x_star - x_hat) / denom;
}

namespace {

// Hungarian algorithm with potentials; cost is n x n, returns row -> column.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost)
{
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is a virtual start.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) {
        row_to_col[match[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

AlignmentResult align_columns(const DenseMatrix& w_star, const DenseMatrix& w_hat)
{
    if (!w_star.same_shape(w_hat)) {
        throw InvalidInput("align_columns: W* and W_hat differ in shape");
    }
    const std::size_t r = w_star.cols();
    std::vector<std::vector<double>> cost(r, std::vector<double>(r, 0.0));
    for (std::size_t t = 0; t < r; ++t) {
        for (std::size_t s = 0; s < r; ++s) {
            double d = 0.0;
            for (std::size_t i = 0; i < w_star.rows(); ++i) {
                const double e = w_hat(i, s) - w_star(i, t);
                d += e * e;
            }
            cost[t][s] = d;
        }
    }

    AlignmentResult result;
    result.permutation = min_cost_assignment(cost);
    result.aligned_W_hat = select_columns(w_hat, result.permutation);
    for (std::size_t t = 0; t < r; ++t) {
        result.cost += cost[t][result.permutation[t]];
    }
    return result;
}

double rel_rmse_W(const DenseMatrix& w_star, const DenseMatrix& w_hat)
{
    const double denom = frobenius_norm(w_star);
    if (denom == 0.0) {
        throw UndefinedMetric("rel_rmse_W: ||W*||_F is zero");
    }
    const AlignmentResult aligned = align_columns(w_star, w_hat);
    return frobenius_norm(w_star - aligned.aligned_W_hat) / denom;
}

namespace {

DenseMatrix project_columns(const DenseMatrix& cols, const Pca2d& pca)
{
    DenseMatrix out(2, cols.cols());
    for (std::size_t j = 0; j < cols.cols(); ++j) {
        for (std::size_t b = 0; b < 2; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < cols.rows(); ++i) {
                s += pca.basis[b][i] * (cols(i, j) - pca.mean_column[i]);
            }
            out(b, j) = s;
        }
    }
    return out;
}

}  // namespace

Pca2d pca_2d(const DenseMatrix& points, const std::vector<DenseMatrix>& overlays)
{
    const std::size_t m = points.rows();
    const std::size_t n = points.cols();
    if (n < 2 || m < 2) {
        throw InvalidInput("pca_2d: need at least 2 columns of dimension >= 2");
    }
    for (const auto& o : overlays) {
        if (o.rows() != m) {
            throw InvalidInput("pca_2d: overlay row count differs from the fitted points");
        }
    }

    Pca2d pca;
    pca.mean_column.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (double v : points.row(i)) {
            pca.mean_column[i] += v;
        }
        pca.mean_column[i] /= static_cast<double>(n);
    }

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += (points(a, j) - pca.mean_column[a]) * (points(b, j) - pca.mean_column[b]);
            }
            cov(a, b) = cov(b, a) = s / static_cast<double>(n);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw NumericalFault("pca_2d: eigen-decomposition failed");
    }
    // Eigenvalues come back in increasing order.
    for (std::size_t b = 0; b < 2; ++b) {
        const Eigen::Index col = static_cast<Eigen::Index>(m - 1 - b);
        std::vector<double> dir(m);
        std::size_t pivot = 0;
        for (std::size_t i = 0; i < m; ++i) {
            dir[i] = eig.eigenvectors()(static_cast<Eigen::Index>(i), col);
            if (std::abs(dir[i]) > std::abs(dir[pivot])) pivot = i;
        }
        if (dir[pivot] < 0.0) {
            for (double& d : dir) d = -d;
        }
        pca.basis[b] = std::move(dir);
        pca.variances[b] = std::max(eig.eigenvalues()(col), 0.0);
    }
    pca.total_variance = cov.trace();

    pca.projected_points = project_columns(points, pca);
    for (const auto& o : overlays) {
        pca.projected_overlays.push_back(project_columns(o, pca));
    }
    return pca;
}

void write_pca_csv(std::ostream& os, const Pca2d& pca, const std::string& points_label,
                   const std::vector<std::string>& overlay_labels)
{
    char buf[96];
    os << "set,index,pc1,pc2\n";
    auto emit = [&](const std::string& label, const DenseMatrix& coords) {
        for (std::size_t j = 0; j < coords.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", j, coords(0, j), coords(1, j));
            os << label << ',' << buf << '\n';
        }
    };
    emit(points_label, pca.projected_points);
    for (std::size_t k = 0; k < pca.projected_overlays.size(); ++k) {
        emit(k < overlay_labels.size() ? overlay_labels[k] : "overlay" + std::to_string(k),
             pca.projected_overlays[k]);
    }
}

}  // namespace smv
