#pragma once

// Accelerated projected gradient for the block quadratics both solvers share:
//
//     q(Z) = <Z, apply(Z)> - 2 <Z, B>,    grad q(Z) = 2 (apply(Z) - B),
//
// where `apply` is linear and self-adjoint PSD (Z -> Z M for the W block,
// Z -> G Z for the H block). q differs from the block objective only by a
// constant, so comparisons of q are comparisons of the true objective.
// Changes are evaluated as q(Z1) - q(Z0) = <Z1 - Z0, apply(Z1) + apply(Z0) - 2B>,
// which stays accurate when q itself is dominated by the dropped constant
// (near-exact fits).

#include <cmath>
#include <cstddef>

#include "smv/linalg.hpp"
#include "smv/matrix.hpp"

namespace smv::detail {

struct FgmStats {
    std::size_t iterations = 0;
    std::size_t restarts = 0;
    double value = 0.0;
};

inline void axpby(DenseMatrix& y, const DenseMatrix& a, const DenseMatrix& b, double beta)
{
    // y = a + beta * (a - b)
    auto yv = y.values();
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < yv.size(); ++k) {
        yv[k] = av[k] + beta * (av[k] - bv[k]);
    }
}

/**
 * Runs at most `max_iters` iterations from the feasible point `z` (updated in
 * place). Step 1/L. Whenever an accelerated step would raise q the momentum is
 * dropped and a plain projected gradient step is retried from the last accepted
 * point; if even that fails to decrease q the loop ends. Hence q(z) never
 * increases. Stops early when ||z_new - z||_F <= tol * ||z||_F.
 */
template <class Apply, class Project>
FgmStats accelerated_projected_gradient(DenseMatrix& z, const DenseMatrix& b, Apply&& apply,
                                        double lipschitz, Project&& project,
                                        std::size_t max_iters, double tol)
{
    FgmStats stats;
    DenseMatrix az = apply(z);
    auto value_of = [&](const DenseMatrix& p, const DenseMatrix& ap) {
        return frobenius_inner(p, ap) - 2.0 * frobenius_inner(p, b);
    };
    stats.value = value_of(z, az);
    if (!(lipschitz > 0.0) || max_iters == 0) {
        return stats;
    }
    const double step = 1.0 / lipschitz;

    DenseMatrix y = z;
    DenseMatrix ay = az;
    DenseMatrix next(z.rows(), z.cols());
    bool momentum = false;
    double t = 1.0;

    while (stats.iterations < max_iters) {
        ++stats.iterations;
        {
            auto nv = next.values();
            auto yv = y.values();
            auto ayv = ay.values();
            auto bv = b.values();
            for (std::size_t k = 0; k < nv.size(); ++k) {
                nv[k] = yv[k] - step * 2.0 * (ayv[k] - bv[k]);
            }
        }
        project(next);
        DenseMatrix anext = apply(next);
        double change = 0.0;
        {
            auto nv = next.values();
            auto zv = z.values();
            auto anv = anext.values();
            auto azv = az.values();
            auto bv = b.values();
            for (std::size_t k = 0; k < nv.size(); ++k) {
                change += (nv[k] - zv[k]) * (anv[k] + azv[k] - 2.0 * bv[k]);
            }
        }

        if (!(change <= 0.0)) {
            if (momentum) {
                y = z;
                ay = az;
                t = 1.0;
                momentum = false;
                ++stats.restarts;
                continue;
            }
            break;
        }

        double diff2 = 0.0;
        double norm2 = 0.0;
        {
            auto nv = next.values();
            auto zv = z.values();
            for (std::size_t k = 0; k < nv.size(); ++k) {
                const double d = nv[k] - zv[k];
                diff2 += d * d;
                norm2 += nv[k] * nv[k];
            }
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        axpby(y, next, z, beta);
        axpby(ay, anext, az, beta);
        momentum = beta != 0.0;
        t = t_next;

        std::swap(z, next);
        std::swap(az, anext);
        stats.value += change;

        if (std::sqrt(diff2) <= tol * std::sqrt(norm2)) {
            break;
        }
    }
    return stats;
}

}  // namespace smv::detail
