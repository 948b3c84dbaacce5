#include "smv/sqrt_minvol.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "smv/linalg.hpp"
#include "smv/metrics.hpp"
#include "smv/projections.hpp"
#include "smv/snpa.hpp"

namespace smv {

void SqrtConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidParameter("sqrt_minvol: lambda must be finite and >= 0");
    }
    if (!(delta > 0.0)) throw InvalidParameter("sqrt_minvol: delta must be > 0");
    if (!(epsilon > 0.0)) throw InvalidParameter("sqrt_minvol: epsilon must be > 0");
    if (max_outer < 1) throw InvalidParameter("sqrt_minvol: max_outer must be >= 1");
    if (!(tol_rel_f > 0.0)) throw InvalidParameter("sqrt_minvol: tol_rel_f must be > 0");
    MinvolConfig probe = inner;
    probe.lambda = 0.0;
    probe.delta = delta;
    probe.validate();
}

void SolveTrace::write_csv(std::ostream& os) const
{
    os << csv_header << '\n';
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& row : rows) {
        os << row.k << ',' << num(row.f_eps) << ',' << num(row.r_k) << ',' << num(row.lambda_k)
           << ',' << num(row.sigma_hat) << ',';
        if (row.rel_rmse_X) os << num(*row.rel_rmse_X);
        os << ',';
        if (row.rel_rmse_W) os << num(*row.rel_rmse_W);
        std::snprintf(buf, sizeof(buf), "%.3f", row.wall_ms);
        os << ',' << buf << '\n';
    }
}

double residual_r(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                  double epsilon)
{
    if (!(epsilon > 0.0)) throw InvalidParameter("residual_r: epsilon must be > 0");
    return squared_norm(x - matmul(w, h)) + epsilon;
}

double f_eps(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h, double lambda,
             double delta, double epsilon)
{
    const double fit = std::sqrt(residual_r(x, w, h, epsilon));
    if (lambda == 0.0) {
        return fit;
    }
    return fit + lambda * logdet_spd(gram_shifted(w, delta));
}

double lambda_k(double r_k, double lambda)
{
    if (!(r_k > 0.0)) throw InvalidParameter("lambda_k: r_k must be > 0");
    return 2.0 * lambda * std::sqrt(r_k);
}

double sigma_hat(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                 double epsilon)
{
    const double mn = static_cast<double>(x.rows()) * static_cast<double>(x.cols());
    return std::sqrt(residual_r(x, w, h, epsilon)) / mn;
}

double surrogate_g(const DenseMatrix& w, const DenseMatrix& h, const DenseMatrix& w_k,
                   const DenseMatrix& h_k, const DenseMatrix& x, double lambda, double delta,
                   double epsilon)
{
    const double r_k = residual_r(x, w_k, h_k, epsilon);
    const double root = std::sqrt(r_k);
    const double u = residual_r(x, w, h, epsilon);
    double g = root + (u - r_k) / (2.0 * root);
    if (lambda == 0.0) {
        return g;
    }
    const DenseMatrix q_k = gram_shifted(w_k, delta);
    const DenseMatrix q = gram_shifted(w, delta);
    const SpdFactor factor = cholesky(q_k);
    // tr(Q_k^{-1} (Q - Q_k))
    const DenseMatrix y = solve_spd(factor, q - q_k);
    double trace = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
        trace += y(i, i);
    }
    return g + lambda * (logdet(factor) + trace);
}

FactorPair gradient_f_eps(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                          double lambda, double delta, double epsilon)
{
    const DenseMatrix resid = matmul(w, h) - x;
    const double root = std::sqrt(squared_norm(resid) + epsilon);
    FactorPair grad{(1.0 / root) * matmul_nt(resid, h), (1.0 / root) * matmul_tn(w, resid)};
    if (lambda != 0.0) {
        grad.W += (2.0 * lambda) * matmul(w, inverse_spd(gram_shifted(w, delta)));
    }
    return grad;
}

double projected_gradient_norm(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                               double lambda, double delta, double epsilon)
{
    const FactorPair grad = gradient_f_eps(x, w, h, lambda, delta, epsilon);
    DenseMatrix pw = w - grad.W;
    project_nonneg_inplace(pw);
    DenseMatrix ph = h - grad.H;
    project_H_columns_inplace(ph);
    return std::sqrt(squared_norm(w - pw) + squared_norm(h - ph));
}

namespace {

using Clock = std::chrono::steady_clock;

TraceRow make_row(std::size_t k, const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                  const SqrtConfig& config, double lambda_eff,
                  const std::optional<GroundTruthRef>& truth, Clock::time_point start)
{
    TraceRow row;
    row.k = k;
    row.r_k = residual_r(x, w, h, config.epsilon);
    row.f_eps = std::sqrt(row.r_k);
    if (config.lambda != 0.0) {
        row.f_eps += config.lambda * logdet_spd(gram_shifted(w, config.delta));
    }
    row.lambda_k = lambda_eff;
    row.sigma_hat =
        std::sqrt(row.r_k) / (static_cast<double>(x.rows()) * static_cast<double>(x.cols()));
    if (truth) {
        row.rel_rmse_X = rel_rmse_X(truth->X_star, w, h);
        row.rel_rmse_W = rel_rmse_W(truth->W_star, w);
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return row;
}

}  // namespace

SqrtResult sqrt_minvol_from(const DenseMatrix& x, const DenseMatrix& w_init,
                            const DenseMatrix& h_init, const SqrtConfig& config,
                            const std::optional<GroundTruthRef>& ground_truth)
{
    config.validate();
    for (double v : x.values()) {
        if (!(v >= 0.0)) {
            throw InvalidInput("sqrt_minvol: X must be entrywise nonnegative and finite");
        }
    }
    if (!in_constraint_set(w_init, h_init)) {
        throw InvalidInput("sqrt_minvol: initial (W, H) is not in the constraint set");
    }
    const auto start = Clock::now();
    const std::size_t r = w_init.cols();

    SqrtResult result;
    result.factors = {w_init, h_init};

    auto next_lambda = [&](double r_k, double previous, std::size_t k) {
        if (config.schedule == LambdaSchedule::scaled) {
            return lambda_k(r_k, config.lambda);
        }
        return k == 1 ? config.lambda : 2.0 * std::sqrt(r_k) * previous;
    };
    auto record = [&](std::size_t k, double previous_lambda) {
        const double r_k = residual_r(x, result.factors.W, result.factors.H, config.epsilon);
        TraceRow row = make_row(k, x, result.factors.W, result.factors.H, config,
                                next_lambda(r_k, previous_lambda, k), ground_truth, start);
        const bool finite = std::isfinite(row.f_eps) && std::isfinite(row.lambda_k);
        result.trace.rows.push_back(std::move(row));
        if (!finite) {
            throw SolveFault("sqrt_minvol: non-finite objective at outer iteration " +
                                 std::to_string(k),
                             result.trace);
        }
    };

    record(1, 0.0);
    MinvolConfig inner = config.inner;
    inner.delta = config.delta;
    while (result.outer_iterations < config.max_outer) {
        const TraceRow& current = result.trace.rows.back();
        inner.lambda = current.lambda_k;
        MinvolState state;
        try {
            state = minvol(x, r, result.factors.W, result.factors.H, inner);
        } catch (const NumericalFault& e) {
            throw SolveFault(e.what(), result.trace);
        } catch (const NotPositiveDefinite& e) {
            throw SolveFault(e.what(), result.trace);
        }
        result.factors = {std::move(state.W), std::move(state.H)};
        ++result.outer_iterations;

        const double f_prev = current.f_eps;
        const double lambda_prev = current.lambda_k;
        record(result.outer_iterations + 1, lambda_prev);
        const double f_now = result.trace.rows.back().f_eps;
        if (std::abs(f_prev - f_now) < config.tol_rel_f * std::abs(f_prev)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

SqrtResult sqrt_minvol(const DenseMatrix& x, std::size_t r, const SqrtConfig& config,
                       const std::optional<GroundTruthRef>& ground_truth)
{
    config.validate();
    const SnpaResult init = snpa(x, r);
    return sqrt_minvol_from(x, init.W0, init.H0, config, ground_truth);
}

}  // namespace smv
