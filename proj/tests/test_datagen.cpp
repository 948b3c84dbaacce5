#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "smv/datagen.hpp"
#include "smv/error.hpp"
#include "smv/projections.hpp"

using smv::DenseMatrix;

TEST(FixedW4, Entries)
{
    const auto w = smv::fixed_W4();
    EXPECT_EQ(w, (DenseMatrix{{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}}));
    EXPECT_EQ(w(0, 0), 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 4; ++i) s += w(i, j);
        EXPECT_EQ(s, 2.0);
    }
}

TEST(FixedW4, GramDeterminantByCofactors)
{
    // W'W is the circulant (2, 1, 0, 1) with eigenvalues 4, 2, 2, 0.
    const auto w = smv::fixed_W4();
    const DenseMatrix g = oracle::naive_product(oracle::naive_transpose(w), w);
    EXPECT_NEAR(oracle::cofactor_det(g), 0.0, 1e-12);
    const DenseMatrix gs = oracle::shifted_gram(w, 0.1);
    EXPECT_NEAR(oracle::cofactor_det(gs), 4.1 * 2.1 * 2.1 * 0.1, 1e-12);
}

TEST(DirichletH, ColumnsOnSimplex)
{
    const auto h = smv::dirichlet_H(5, 300, 1.0, 4);
    for (std::size_t j = 0; j < h.cols(); ++j) {
        double s = 0;
        for (std::size_t i = 0; i < h.rows(); ++i) {
            EXPECT_GE(h(i, j), 0.0);
            s += h(i, j);
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(DirichletH, LargeAlphaConcentrates)
{
    const auto h = smv::dirichlet_H(4, 100, 1e6, 5);
    for (double v : h.values()) EXPECT_NEAR(v, 0.25, 1e-2);
}

TEST(DirichletH, RankOne) { EXPECT_EQ(smv::dirichlet_H(1, 7, 1.0, 6), DenseMatrix(1, 7, 1.0)); }

TEST(DirichletH, Errors)
{
    EXPECT_THROW(smv::dirichlet_H(3, 5, 0.0, 1), smv::InvalidParameter);
    EXPECT_THROW(smv::dirichlet_H(0, 5, 1.0, 1), smv::InvalidParameter);
}

TEST(RandomUniformW, SupportMeanDeterminism)
{
    const auto w = smv::random_uniform_W(25, 20, 9);
    double mean = 0;
    for (double v : w.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        mean += v / 500.0;
    }
    EXPECT_NEAR(mean, 0.5, 0.06);
    EXPECT_EQ(w, smv::random_uniform_W(25, 20, 9));
    EXPECT_NE(w, smv::random_uniform_W(25, 20, 10));
}

TEST(UniformNoise, SupportAndMoments)
{
    const auto xs = oracle::random_matrix(10, 400, 1);
    EXPECT_EQ(smv::add_uniform_noise(xs, 0.0, 3), xs);
    const double sigma = 0.1;
    const auto x = smv::add_uniform_noise(xs, sigma, 3);
    double mean = 0;
    for (std::size_t i = 0; i < xs.rows(); ++i)
        for (std::size_t j = 0; j < xs.cols(); ++j) {
            const double e = x(i, j) - xs(i, j);
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, sigma + 1e-15);
            mean += e / 4000.0;
        }
    EXPECT_NEAR(mean, sigma / 2, 3 * sigma / std::sqrt(12.0 * 4000));
    EXPECT_THROW(smv::add_uniform_noise(xs, -1.0, 3), smv::InvalidParameter);
}

TEST(GaussianNoise, StaysNonnegative)
{
    const auto xs = oracle::random_matrix(5, 50, 2, 0, 0.1);
    const auto x = smv::add_gaussian_noise(xs, 0.2, 4);
    for (double v : x.values()) EXPECT_GE(v, 0.0);
    EXPECT_NE(x, xs);
}

TEST(MakeInstance, Paper4x4)
{
    smv::GeneratorSpec g;
    const auto inst = smv::make_instance(g);
    EXPECT_EQ(inst.truth.H_star.rows(), 4u);
    EXPECT_EQ(inst.truth.H_star.cols(), 500u);
    EXPECT_EQ(inst.truth.W_star, smv::fixed_W4());
    EXPECT_EQ(inst.X, smv::matmul(inst.truth.W_star, inst.truth.H_star));
    EXPECT_EQ(inst.X, inst.truth.X_star);
    EXPECT_TRUE(smv::in_constraint_set(inst.truth.W_star, inst.truth.H_star));
}

TEST(MakeInstance, RandomUniformShape)
{
    smv::GeneratorSpec g;
    g.kind = "random-uniform";
    g.m = 25;
    g.r = 20;
    g.n = 10000;
    const auto inst = smv::make_instance(g);
    EXPECT_EQ(inst.X.rows(), 25u);
    EXPECT_EQ(inst.X.cols(), 10000u);
    EXPECT_EQ(inst.truth.H_star.rows(), 20u);
}

TEST(MakeInstance, NoiseBoundAndDeterminism)
{
    smv::GeneratorSpec g;
    g.sigma = 0.1;
    g.seed = 11;
    const auto a = smv::make_instance(g);
    EXPECT_LE(smv::max_abs_diff(a.X, a.truth.X_star), 0.1);
    const auto b = smv::make_instance(g);
    EXPECT_EQ(a.X, b.X);
    EXPECT_EQ(a.truth.H_star, b.truth.H_star);
    // The noise level does not change the noiseless part.
    g.sigma = 0.01;
    EXPECT_EQ(smv::make_instance(g).truth.X_star, a.truth.X_star);
}

TEST(MakeInstance, Errors)
{
    smv::GeneratorSpec g;
    g.kind = "bogus";
    EXPECT_THROW(smv::make_instance(g), smv::InvalidParameter);
    g.kind = "paper-4x4";
    g.sigma = -0.1;
    EXPECT_THROW(smv::make_instance(g), smv::InvalidParameter);
}

TEST(DeriveSeed, PathSensitive)
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(smv::derive_seed(1, {a, b}));
    EXPECT_EQ(seen.size(), 400u);
    EXPECT_EQ(smv::derive_seed(5, {1, 2}), smv::derive_seed(5, {1, 2}));
    EXPECT_NE(smv::derive_seed(5, {1, 2}), smv::derive_seed(5, {2, 1}));
    EXPECT_NE(smv::derive_seed(5, {1}), smv::derive_seed(6, {1}));
}

TEST(MakeSeparable, PlantedColumns)
{
    const auto s = smv::make_separable(6, 50, 4, 3);
    ASSERT_EQ(s.vertex_indices.size(), 4u);
    for (std::size_t t = 0; t < 4; ++t) {
        EXPECT_EQ(s.X.column(s.vertex_indices[t]), s.W_star.column(t));
    }
    EXPECT_EQ(s.X, smv::matmul(s.W_star, s.H_star));
}

TEST(NoiseModel, Names)
{
    EXPECT_EQ(smv::parse_noise_model("uniform"), smv::NoiseModel::uniform);
    EXPECT_EQ(smv::parse_noise_model("gaussian"), smv::NoiseModel::gaussian);
    EXPECT_EQ(smv::to_string(smv::NoiseModel::gaussian), "gaussian");
    EXPECT_THROW(smv::parse_noise_model("laplace"), smv::InvalidParameter);
}
