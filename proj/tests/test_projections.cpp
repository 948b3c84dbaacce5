#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smv/projections.hpp"

using smv::DenseMatrix;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t k)
{
    std::uniform_real_distribution<double> u(-1.0, 1.5);
    std::vector<double> v(k);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST(ProjectNonneg, Clamp)
{
    EXPECT_EQ(smv::project_nonneg(DenseMatrix{{-1, 2}, {0, -3}}), (DenseMatrix{{0, 2}, {0, 0}}));
}

TEST(ProjectNonneg, NonnegativeUnchanged)
{
    const auto m = oracle::random_matrix(4, 5, 3);
    EXPECT_EQ(smv::project_nonneg(m), m);
}

TEST(ProjectNonneg, MatchesElementLoop)
{
    const auto m = oracle::random_matrix(5, 6, 9, -1, 1);
    const auto p = smv::project_nonneg(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) EXPECT_EQ(p(i, j), m(i, j) > 0 ? m(i, j) : 0.0);
}

TEST(CappedSimplex, Examples)
{
    EXPECT_EQ(smv::project_capped_simplex(std::vector<double>{0.2, 0.3}),
              (std::vector<double>{0.2, 0.3}));
    EXPECT_EQ(smv::project_capped_simplex(std::vector<double>{2, 0}), (std::vector<double>{1, 0}));
    const auto p = smv::project_capped_simplex(std::vector<double>{0.9, 0.8});
    EXPECT_NEAR(p[0], 0.55, 1e-15);
    EXPECT_NEAR(p[1], 0.45, 1e-15);
    const auto q = oracle::capped_simplex_qp({0.9, 0.8});
    EXPECT_NEAR(q[0], 0.55, 1e-15);
    EXPECT_NEAR(q[1], 0.45, 1e-15);
}

TEST(CappedSimplex, MatchesActiveSetOracle)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 500; ++t) {
        const std::size_t k = 1 + t % 6;
        const auto v = random_vector(rng, k);
        const auto p = smv::project_capped_simplex(v);
        const auto ref = oracle::capped_simplex_qp(v);
        EXPECT_LE(dist(p, ref), 1e-10) << "case " << t;
    }
}

TEST(CappedSimplex, BeatsRandomFeasiblePoints)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 1 + t % 6;
        const auto v = random_vector(rng, k);
        const auto p = smv::project_capped_simplex(v);
        const double best = dist(p, v);
        const DenseMatrix h = oracle::random_capped_simplex(k, 2000, 7000 + t);
        for (std::size_t j = 0; j < h.cols(); ++j) {
            EXPECT_LE(best, dist(h.column(j), v) + 1e-12);
        }
    }
}

TEST(CappedSimplex, IdempotentAndNonexpansive)
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t k = 1 + t % 8;
        const auto u = random_vector(rng, k);
        const auto v = random_vector(rng, k);
        const auto pu = smv::project_capped_simplex(u);
        const auto pv = smv::project_capped_simplex(v);
        EXPECT_LE(dist(pu, pv), dist(u, v) + 1e-12);
        const auto ppu = smv::project_capped_simplex(pu);
        EXPECT_LE(dist(ppu, pu), 1e-15);
    }
}

TEST(ProjectHColumns, FeasibleUnchanged)
{
    const auto h = oracle::random_capped_simplex(4, 10, 3);
    EXPECT_EQ(smv::project_H_columns(h), h);
}

TEST(ProjectHColumns, OnlyInfeasibleColumnChanges)
{
    DenseMatrix h = oracle::random_capped_simplex(3, 5, 4);
    h(0, 2) = 2.0;
    const auto p = smv::project_H_columns(h);
    for (std::size_t j = 0; j < 5; ++j) {
        if (j == 2) continue;
        EXPECT_EQ(p.column(j), h.column(j));
    }
    EXPECT_NE(p.column(2), h.column(2));
}

TEST(ProjectHColumns, MatchesPerColumnOracle)
{
    const auto h = oracle::random_matrix(4, 6, 2, -0.5, 1.0);
    const auto p = smv::project_H_columns(h);
    for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_LE(dist(p.column(j), oracle::capped_simplex_qp(h.column(j))), 1e-10);
    }
    EXPECT_TRUE(smv::in_constraint_set(DenseMatrix(2, 4), p));
}

TEST(ConstraintSet, Detection)
{
    const DenseMatrix w{{1, 0}, {0, 1}};
    EXPECT_TRUE(smv::in_constraint_set(w, DenseMatrix{{0.5, 0}, {0.5, 0.2}}));
    EXPECT_FALSE(smv::in_constraint_set(w, DenseMatrix{{0.7, 0}, {0.5, 0.2}}));
    EXPECT_FALSE(smv::in_constraint_set(w, DenseMatrix{{-0.1, 0}, {0.5, 0.2}}));
    EXPECT_FALSE(smv::in_constraint_set(DenseMatrix{{-1, 0}, {0, 1}}, DenseMatrix(2, 2)));
}
