#include "smv/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "smv/error.hpp"

namespace smv {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

// Stream tags for the pieces of one instance.
constexpr std::uint64_t kStreamW = 1;
constexpr std::uint64_t kStreamH = 2;
constexpr std::uint64_t kStreamNoise = 3;
constexpr std::uint64_t kStreamPlacement = 4;

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : path) {
        s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

DenseMatrix fixed_W4()
{
    return DenseMatrix{{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}};
}

DenseMatrix dirichlet_H(std::size_t r, std::size_t n, double alpha, std::uint64_t seed)
{
    if (r == 0 || n == 0) throw InvalidParameter("dirichlet_H: r and n must be >= 1");
    if (!(alpha > 0.0)) throw InvalidParameter("dirichlet_H: alpha must be > 0");
    std::mt19937_64 eng(seed);
    std::gamma_distribution<double> gamma(alpha, 1.0);
    DenseMatrix h(r, n);
    std::vector<double> draw(r);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            draw[i] = gamma(eng);
            sum += draw[i];
        }
        if (!(sum > 0.0)) {
            // Every gamma draw underflowed (tiny alpha); fall back to a vertex.
            std::fill(draw.begin(), draw.end(), 0.0);
            draw[eng() % r] = 1.0;
            sum = 1.0;
        }
        for (std::size_t i = 0; i < r; ++i) {
            h(i, j) = draw[i] / sum;
        }
    }
    return h;
}

DenseMatrix random_uniform_W(std::size_t m, std::size_t r, std::uint64_t seed)
{
    if (m == 0 || r == 0) throw InvalidParameter("random_uniform_W: m and r must be >= 1");
    std::mt19937_64 eng(seed);
    DenseMatrix w(m, r);
    for (double& v : w.values()) {
        v = uniform01(eng);
    }
    return w;
}

DenseMatrix add_uniform_noise(const DenseMatrix& x_star, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidParameter("add_uniform_noise: sigma must be finite and >= 0");
    }
    DenseMatrix x = x_star;
    if (sigma == 0.0) {
        return x;
    }
    std::mt19937_64 eng(seed);
    for (double& v : x.values()) {
        v += sigma * uniform01(eng);
    }
    return x;
}

DenseMatrix add_gaussian_noise(const DenseMatrix& x_star, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidParameter("add_gaussian_noise: sigma must be finite and >= 0");
    }
    DenseMatrix x = x_star;
    if (sigma == 0.0) {
        return x;
    }
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : x.values()) {
        v = std::max(v + normal(eng), 0.0);
    }
    return x;
}

Instance make_instance(const GeneratorSpec& spec)
{
    if (spec.n == 0) throw InvalidParameter("make_instance: n must be >= 1");
    if (!(spec.sigma >= 0.0)) throw InvalidParameter("make_instance: sigma must be >= 0");

    Instance inst;
    inst.truth.spec = spec;
    if (spec.kind == "paper-4x4") {
        inst.truth.W_star = fixed_W4();
        inst.truth.spec.m = 4;
        inst.truth.spec.r = 4;
    } else if (spec.kind == "random-uniform") {
        if (spec.m == 0 || spec.r == 0) {
            throw InvalidParameter("make_instance: random-uniform needs m, r >= 1");
        }
        inst.truth.W_star = random_uniform_W(spec.m, spec.r, derive_seed(spec.seed, {kStreamW}));
    } else {
        throw InvalidParameter("make_instance: unknown generator '" + spec.kind +
                               "' (expected paper-4x4 or random-uniform)");
    }
    inst.truth.H_star = dirichlet_H(inst.truth.W_star.cols(), spec.n, spec.alpha,
                                    derive_seed(spec.seed, {kStreamH}));
    inst.truth.X_star = matmul(inst.truth.W_star, inst.truth.H_star);
    const std::uint64_t noise_seed = derive_seed(spec.seed, {kStreamNoise});
    inst.X = spec.noise == NoiseModel::uniform
                 ? add_uniform_noise(inst.truth.X_star, spec.sigma, noise_seed)
                 : add_gaussian_noise(inst.truth.X_star, spec.sigma, noise_seed);
    return inst;
}

SeparableInstance make_separable(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                                 double alpha)
{
    if (r == 0 || r > m || r > n) {
        throw InvalidParameter("make_separable: need 0 < r <= min(m, n)");
    }
    SeparableInstance inst;
    inst.W_star = random_uniform_W(m, r, derive_seed(seed, {kStreamW}));
    inst.H_star = dirichlet_H(r, n, alpha, derive_seed(seed, {kStreamH}));

    std::mt19937_64 eng(derive_seed(seed, {kStreamPlacement}));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates with our own index draw, independent of the library shuffle.
    for (std::size_t t = 0; t < r; ++t) {
        const std::size_t pick = t + static_cast<std::size_t>(eng() % (n - t));
        std::swap(order[t], order[pick]);
    }
    inst.vertex_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r));
    for (std::size_t t = 0; t < r; ++t) {
        const std::size_t j = inst.vertex_indices[t];
        for (std::size_t i = 0; i < r; ++i) {
            inst.H_star(i, j) = i == t ? 1.0 : 0.0;
        }
    }
    inst.X = matmul(inst.W_star, inst.H_star);
    return inst;
}

std::string to_string(NoiseModel noise)
{
    return noise == NoiseModel::uniform ? "uniform" : "gaussian";
}

NoiseModel parse_noise_model(const std::string& name)
{
    if (name == "uniform") return NoiseModel::uniform;
    if (name == "gaussian") return NoiseModel::gaussian;
    throw InvalidParameter("unknown noise model '" + name + "' (expected uniform or gaussian)");
}

}  // namespace smv
