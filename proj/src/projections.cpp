#include "smv/projections.hpp"

#include <algorithm>
#include <functional>

namespace smv {

void project_nonneg_inplace(DenseMatrix& m)
{
    for (double& v : m.values()) {
        v = std::max(v, 0.0);
    }
}

DenseMatrix project_nonneg(const DenseMatrix& m)
{
    DenseMatrix out = m;
    project_nonneg_inplace(out);
    return out;
}

void project_capped_simplex_inplace(std::span<double> v)
{
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(x, 0.0);
        sum += x;
    }
    if (sum <= 1.0) {
        return;
    }
    // Project onto {h >= 0, sum(h) = 1}. Negative entries never enter the support,
    // so sorting the clamped values yields the same threshold as sorting v.
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            tau = candidate;
        } else {
            break;
        }
    }
    for (double& x : v) {
        x = std::max(x - tau, 0.0);
    }
}

std::vector<double> project_capped_simplex(std::span<const double> v)
{
    std::vector<double> out(v.begin(), v.end());
    project_capped_simplex_inplace(out);
    return out;
}

void project_H_columns_inplace(DenseMatrix& h)
{
    std::vector<double> col(h.rows());
    for (std::size_t j = 0; j < h.cols(); ++j) {
        for (std::size_t i = 0; i < h.rows(); ++i) {
            col[i] = h(i, j);
        }
        project_capped_simplex_inplace(col);
        h.set_column(j, col);
    }
}

DenseMatrix project_H_columns(const DenseMatrix& h)
{
    DenseMatrix out = h;
    project_H_columns_inplace(out);
    return out;
}

bool in_constraint_set(const DenseMatrix& w, const DenseMatrix& h, double tol)
{
    for (double v : w.values()) {
        if (!(v >= 0.0)) return false;
    }
    for (double v : h.values()) {
        if (!(v >= 0.0)) return false;
    }
    std::vector<double> sums(h.cols(), 0.0);
    for (std::size_t i = 0; i < h.rows(); ++i) {
        auto hi = h.row(i);
        for (std::size_t j = 0; j < hi.size(); ++j) {
            sums[j] += hi[j];
        }
    }
    return std::all_of(sums.begin(), sums.end(), [tol](double s) { return s <= 1.0 + tol; });
}

}  // namespace smv
