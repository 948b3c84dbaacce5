#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smv/matrix.hpp"

namespace smv {

/// Derives an independent stream seed from a base seed and a path of indices,
/// so sweep cells can be generated in any order (or in parallel) reproducibly.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// The 4 x 4 0/1 ground truth used by the small experiments.
DenseMatrix fixed_W4();

/// r x n matrix whose columns are i.i.d. Dirichlet(alpha * 1_r).
DenseMatrix dirichlet_H(std::size_t r, std::size_t n, double alpha, std::uint64_t seed);

/// m x r matrix with i.i.d. Uniform[0, 1] entries.
DenseMatrix random_uniform_W(std::size_t m, std::size_t r, std::uint64_t seed);

/// X* + E with E_ij i.i.d. Uniform[0, sigma]. sigma == 0 returns X* exactly.
DenseMatrix add_uniform_noise(const DenseMatrix& x_star, double sigma, std::uint64_t seed);

/// X* + E with E_ij i.i.d. N(0, sigma^2), clipped at zero so X stays nonnegative.
DenseMatrix add_gaussian_noise(const DenseMatrix& x_star, double sigma, std::uint64_t seed);

enum class NoiseModel { uniform, gaussian };

struct GeneratorSpec {
    // "paper-4x4" or "random-uniform"
    std::string kind = "paper-4x4";
    std::size_t m = 4;  // random-uniform only
    std::size_t r = 4;  // random-uniform only
    std::size_t n = 500;
    double alpha = 1.0;
    double sigma = 0.0;
    NoiseModel noise = NoiseModel::uniform;
    std::uint64_t seed = 1;
};

struct GroundTruth {
    DenseMatrix W_star;
    DenseMatrix H_star;
    DenseMatrix X_star;
    GeneratorSpec spec;
};

struct Instance {
    GroundTruth truth;
    DenseMatrix X;
};

/// Throws InvalidParameter for an unknown kind, bad sizes, or sigma < 0.
Instance make_instance(const GeneratorSpec& spec);

struct SeparableInstance {
    DenseMatrix W_star;
    DenseMatrix H_star;
    DenseMatrix X;
    // Columns of X that equal the columns of W_star, in W_star order.
    std::vector<std::size_t> vertex_indices;
};

/**
 * Noiseless separable data: W* is Uniform[0, 1] (m x r); H* has Dirichlet
 * columns except for r randomly placed unit columns, so r columns of X are
 * exactly the columns of W*. Requires r <= m and r <= n.
 */
SeparableInstance make_separable(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                                 double alpha = 1.0);

std::string to_string(NoiseModel noise);
NoiseModel parse_noise_model(const std::string& name);

}  // namespace smv
