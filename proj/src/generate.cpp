#include "hybridkc/generate.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hybridkc {

namespace {

std::vector<double> uniform_coords(Xoshiro256PlusPlus& rng, std::size_t count, std::size_t dim) {
    std::vector<double> coords(count * dim);
    for (auto& c : coords) c = rng.next_double();
    return coords;
}

// Box-Muller; consumes two uniforms per pair
double gaussian(Xoshiro256PlusPlus& rng) {
    double u1 = rng.next_double();
    while (u1 <= 0.0) u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

void check_sizes(std::size_t n, std::size_t m, std::uint32_t k) {
    if (n == 0) throw std::invalid_argument("need at least one client");
    if (m == 0) throw std::invalid_argument("need at least one facility");
    if (k == 0) throw std::invalid_argument("k must be >= 1");
}

} // namespace

Instance gen_euclidean_uniform(std::size_t n, std::size_t m, std::size_t dim, std::uint32_t k,
                               double r, std::uint64_t seed) {
    check_sizes(n, m, k);
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    Xoshiro256PlusPlus rng(derive_seed(seed, 0xE0C1, dim));
    auto clients = uniform_coords(rng, n, dim);
    auto facilities = uniform_coords(rng, m, dim);
    Instance inst;
    inst.space = MetricSpace::euclidean(dim, std::move(clients), std::move(facilities));
    inst.k = k;
    inst.r = r;
    return inst;
}

Instance gen_euclidean_planted(std::size_t n, std::size_t m, std::size_t dim, std::uint32_t k,
                               double r, std::uint64_t seed) {
    check_sizes(n, m, k);
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    Xoshiro256PlusPlus rng(derive_seed(seed, 0x91A, dim));

    const std::size_t blobs = k;
    std::vector<double> centers = uniform_coords(rng, blobs, dim);

    std::vector<double> clients(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t blob = i % blobs;
        for (std::size_t j = 0; j < dim; ++j)
            clients[i * dim + j] = centers[blob * dim + j] + 0.05 * gaussian(rng);
    }

    std::vector<double> facilities(m * dim);
    for (std::size_t f = 0; f < m; ++f) {
        if (f < blobs) {
            for (std::size_t j = 0; j < dim; ++j)
                facilities[f * dim + j] = centers[f * dim + j] + 0.01 * gaussian(rng);
        } else {
            for (std::size_t j = 0; j < dim; ++j) facilities[f * dim + j] = rng.next_double();
        }
    }

    Instance inst;
    inst.space = MetricSpace::euclidean(dim, std::move(clients), std::move(facilities));
    inst.k = k;
    inst.r = r;
    return inst;
}

Instance gen_matrix_random_metric(std::size_t n, std::size_t m, std::uint32_t k, double r,
                                  std::uint64_t seed) {
    check_sizes(n, m, k);
    Xoshiro256PlusPlus rng(derive_seed(seed, 0x3A7, n + m));

    const std::size_t s = n + m;
    const double inf = 1e30;
    std::vector<double> w(s * s, inf);
    for (std::size_t i = 0; i < s; ++i) w[i * s + i] = 0.0;

    auto set_edge = [&](std::size_t i, std::size_t j, double weight) {
        if (weight < w[i * s + j]) {
            w[i * s + j] = weight;
            w[j * s + i] = weight;
        }
    };

    // random spanning chain keeps the graph connected, extra edges add shortcuts
    for (std::size_t i = 1; i < s; ++i) {
        const std::size_t j = rng.next_below(i);
        set_edge(i, j, 0.1 + rng.next_double());
    }
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = i + 1; j < s; ++j) {
            if (rng.next_double() < 0.35) set_edge(i, j, 0.1 + rng.next_double());
        }
    }

    // Floyd-Warshall closure; the result is a metric by construction
    for (std::size_t via = 0; via < s; ++via) {
        for (std::size_t i = 0; i < s; ++i) {
            const double div = w[i * s + via];
            if (div >= inf) continue;
            for (std::size_t j = 0; j < s; ++j) {
                const double cand = div + w[via * s + j];
                if (cand < w[i * s + j]) w[i * s + j] = cand;
            }
        }
    }

    Instance inst;
    inst.space = MetricSpace::matrix(n, m, std::move(w), /*check_triangle=*/false);
    inst.k = k;
    inst.r = r;
    return inst;
}

Instance generate_instance(const std::string& kind, std::size_t n, std::size_t m,
                           std::size_t dim, std::uint32_t k, double r, std::uint64_t seed) {
    if (kind == "euclidean-uniform") return gen_euclidean_uniform(n, m, dim, k, r, seed);
    if (kind == "euclidean-planted") return gen_euclidean_planted(n, m, dim, k, r, seed);
    if (kind == "matrix-random-metric") return gen_matrix_random_metric(n, m, k, r, seed);
    throw ValidationError("unknown instance kind: " + kind);
}

} // namespace hybridkc
