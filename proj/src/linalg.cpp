#include "smv/linalg.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "smv/error.hpp"

namespace smv {

double squared_norm(const DenseMatrix& m)
{
    double s = 0.0;
    for (double v : m.values()) {
        s += v * v;
    }
    return s;
}

double frobenius_norm(const DenseMatrix& m)
{
    if (!m.all_finite()) {
        throw InvalidInput("frobenius_norm: non-finite entry");
    }
    // Scaled accumulation so huge entries do not overflow the sum of squares.
    double scale = max_abs(m);
    if (scale == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (double v : m.values()) {
        const double t = v / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

DenseMatrix gram_shifted(const DenseMatrix& w, double delta)
{
    if (!(delta > 0.0)) {
        throw InvalidParameter("gram_shifted: delta must be > 0");
    }
    DenseMatrix q = matmul_tn(w, w);
    // Mirror the upper triangle so the result is symmetric bit for bit.
    for (std::size_t i = 0; i < q.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            q(i, j) = q(j, i);
        }
        q(i, i) += delta;
    }
    return q;
}

SpdFactor cholesky(const DenseMatrix& q)
{
    const std::size_t n = q.rows();
    if (q.cols() != n || n == 0) {
        throw InvalidInput("cholesky: matrix must be square and non-empty");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(q(i, j) - q(j, i)) > 1e-10) {
                throw InvalidInput("cholesky: matrix is not symmetric");
            }
        }
    }
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = q(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            std::ostringstream msg;
            msg << "cholesky: non-positive pivot " << d << " at column " << j;
            throw NotPositiveDefinite(msg.str());
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = q(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / ljj;
        }
    }
    return SpdFactor(std::move(l));
}

double logdet(const SpdFactor& f)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.dimension(); ++i) {
        s += std::log(f.lower()(i, i));
    }
    return 2.0 * s;
}

double logdet_spd(const DenseMatrix& q) { return logdet(cholesky(q)); }

DenseMatrix solve_spd(const SpdFactor& f, const DenseMatrix& b)
{
    const std::size_t n = f.dimension();
    if (b.rows() != n) {
        throw InvalidInput("solve_spd: right-hand side has wrong row count");
    }
    const DenseMatrix& l = f.lower();
    DenseMatrix y = b;
    const std::size_t k = b.cols();
    // L z = b
    for (std::size_t i = 0; i < n; ++i) {
        auto yi = y.row(i);
        for (std::size_t p = 0; p < i; ++p) {
            const double lip = l(i, p);
            auto yp = y.row(p);
            for (std::size_t c = 0; c < k; ++c) {
                yi[c] -= lip * yp[c];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            yi[c] /= l(i, i);
        }
    }
    // L' y = z
    for (std::size_t ii = n; ii-- > 0;) {
        auto yi = y.row(ii);
        for (std::size_t p = ii + 1; p < n; ++p) {
            const double lpi = l(p, ii);
            auto yp = y.row(p);
            for (std::size_t c = 0; c < k; ++c) {
                yi[c] -= lpi * yp[c];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            yi[c] /= l(ii, ii);
        }
    }
    return y;
}

DenseMatrix inverse_spd(const DenseMatrix& q)
{
    DenseMatrix inv = solve_spd(cholesky(q), DenseMatrix::identity(q.rows()));
    for (std::size_t i = 0; i < inv.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double avg = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = avg;
            inv(j, i) = avg;
        }
    }
    return inv;
}

double spectral_norm(const DenseMatrix& m, double tol, std::size_t max_iters)
{
    if (!(tol > 0.0)) {
        throw InvalidParameter("spectral_norm: tol must be > 0");
    }
    if (max_abs(m) == 0.0) {
        return 0.0;
    }
    // Power iteration on the smaller Gram matrix G.
    const DenseMatrix g = m.rows() < m.cols() ? matmul_nt(m, m) : matmul_tn(m, m);
    const std::size_t n = g.rows();
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> gv(n);
    double estimate = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            auto gi = g.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                s += gi[j] * v[j];
            }
            gv[i] = s;
        }
        double rayleigh = 0.0;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += v[i] * gv[i];
            norm2 += gv[i] * gv[i];
        }
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {
            // v landed in the null space; the start vector was orthogonal to range(G).
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = gv[i] / norm;
        }
        const double next = std::sqrt(std::max(rayleigh, 0.0));
        if (it > 0 && std::abs(next - estimate) <= tol * next) {
            estimate = next;
            break;
        }
        estimate = next;
    }
    return estimate;
}

}  // namespace smv
