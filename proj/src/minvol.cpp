#include "smv/minvol.hpp"

#include <cmath>
#include <sstream>

#include "fgm.hpp"
#include "smv/error.hpp"
#include "smv/linalg.hpp"
#include "smv/projections.hpp"

namespace smv {

namespace {

void check_shapes(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h)
{
    if (w.rows() != x.rows() || h.cols() != x.cols() || w.cols() != h.rows()) {
        std::ostringstream msg;
        msg << "shape mismatch: X " << x.rows() << "x" << x.cols() << ", W " << w.rows() << "x"
            << w.cols() << ", H " << h.rows() << "x" << h.cols();
        throw InvalidInput(msg.str());
    }
}

double residual_squared(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h)
{
    return squared_norm(x - matmul(w, h));
}

}  // namespace

void MinvolConfig::validate() const
{
    if (!(delta > 0.0)) throw InvalidParameter("minvol: delta must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidParameter("minvol: lambda must be finite and >= 0");
    }
    if (outer_sweeps < 1 || inner_iters_per_block < 1) {
        throw InvalidParameter("minvol: iteration budgets must be >= 1");
    }
    if (!(tol_rel_obj > 0.0)) throw InvalidParameter("minvol: tol_rel_obj must be > 0");
    if (!(inner_tol >= 0.0)) throw InvalidParameter("minvol: inner_tol must be >= 0");
}

double objective_minvol(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                        double lambda, double delta)
{
    check_shapes(x, w, h);
    const double fit = residual_squared(x, w, h);
    if (lambda == 0.0) {
        return fit;
    }
    return fit + lambda * logdet_spd(gram_shifted(w, delta));
}

DenseMatrix gradient_H(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h)
{
    check_shapes(x, w, h);
    return 2.0 * matmul_tn(w, matmul(w, h) - x);
}

DenseMatrix gradient_W(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                       const DenseMatrix& a, double lambda_eff)
{
    check_shapes(x, w, h);
    DenseMatrix g = 2.0 * matmul_nt(matmul(w, h) - x, h);
    if (lambda_eff != 0.0) {
        g += (2.0 * lambda_eff) * matmul(w, a);
    }
    return g;
}

DenseMatrix update_H(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                     std::size_t iters, double tol)
{
    check_shapes(x, w, h);
    const DenseMatrix gram = matmul_tn(w, w);
    const DenseMatrix wtx = matmul_tn(w, x);
    const double lipschitz = 2.0 * spectral_norm(gram);
    DenseMatrix out = h;
    detail::accelerated_projected_gradient(
        out, wtx, [&](const DenseMatrix& z) { return matmul(gram, z); }, lipschitz,
        [](DenseMatrix& z) { project_H_columns_inplace(z); }, iters, tol);
    return out;
}

DenseMatrix update_W(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                     const DenseMatrix& a, double lambda_eff, std::size_t iters, double tol)
{
    check_shapes(x, w, h);
    if (a.rows() != w.cols() || a.cols() != w.cols()) {
        throw InvalidInput("update_W: A must be r x r");
    }
    if (!(lambda_eff >= 0.0)) {
        throw InvalidParameter("update_W: lambda_eff must be >= 0");
    }
    try {
        (void)cholesky(a);
    } catch (const Error& e) {
        throw InvalidInput(std::string("update_W: A is not symmetric positive definite (") +
                           e.what() + ")");
    }
    const DenseMatrix hht = matmul_nt(h, h);
    DenseMatrix curvature = hht;
    if (lambda_eff != 0.0) {
        curvature += lambda_eff * a;
    }
    const DenseMatrix xht = matmul_nt(x, h);
    const double lipschitz =
        2.0 * (spectral_norm(hht) + (lambda_eff != 0.0 ? lambda_eff * spectral_norm(a) : 0.0));
    DenseMatrix out = w;
    detail::accelerated_projected_gradient(
        out, xht, [&](const DenseMatrix& z) { return matmul(z, curvature); }, lipschitz,
        [](DenseMatrix& z) { project_nonneg_inplace(z); }, iters, tol);
    return out;
}

MinvolState minvol(const DenseMatrix& x, std::size_t r, const DenseMatrix& w_init,
                   const DenseMatrix& h_init, const MinvolConfig& config)
{
    config.validate();
    check_shapes(x, w_init, h_init);
    if (w_init.cols() != r) {
        throw InvalidInput("minvol: W_init does not have r columns");
    }
    if (!in_constraint_set(w_init, h_init)) {
        throw InvalidInput("minvol: initial (W, H) is not in the constraint set");
    }

    MinvolState state{w_init, h_init, {}, 0};
    double objective = objective_minvol(x, state.W, state.H, config.lambda, config.delta);
    state.objective_history.push_back(objective);

    for (std::size_t sweep = 0; sweep < config.outer_sweeps; ++sweep) {
        const DenseMatrix a = inverse_spd(gram_shifted(state.W, config.delta));
        state.W = update_W(x, state.W, state.H, a, config.lambda, config.inner_iters_per_block,
                           config.inner_tol);
        state.H = update_H(x, state.W, state.H, config.inner_iters_per_block, config.inner_tol);
        ++state.sweeps;

        const double next = objective_minvol(x, state.W, state.H, config.lambda, config.delta);
        state.objective_history.push_back(next);
        if (!std::isfinite(next)) {
            throw NumericalFault("minvol: objective became non-finite");
        }
        const double change = std::abs(objective - next);
        objective = next;
        if (change < config.tol_rel_obj * std::abs(state.objective_history.rbegin()[1])) {
            break;
        }
    }
    return state;
}

double lambda_from_init(const DenseMatrix& x, const DenseMatrix& w0, const DenseMatrix& h0,
                        double lambda_tilde, double delta)
{
    check_shapes(x, w0, h0);
    const double denominator = logdet_spd(gram_shifted(w0, delta));
    if (std::abs(denominator) < 1e-300) {
        throw DegenerateDenominator("lambda_from_init: log det(W0'W0 + delta I) is zero");
    }
    return lambda_tilde * residual_squared(x, w0, h0) / denominator;
}

}  // namespace smv
