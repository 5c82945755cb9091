#pragma once

// Deterministic instance generators for tests and the CLI. Same seed, same
// instance, byte for byte.

#include "hybridkc/instance.hpp"

#include <cstdint>
#include <string>

namespace hybridkc {

// clients and facilities uniform in [0,1]^dim
Instance gen_euclidean_uniform(std::size_t n, std::size_t m, std::size_t dim, std::uint32_t k,
                               double r, std::uint64_t seed);

// k Gaussian-like blobs; the first min(k, m) facilities sit at blob centers
Instance gen_euclidean_planted(std::size_t n, std::size_t m, std::size_t dim, std::uint32_t k,
                               double r, std::uint64_t seed);

// shortest-path closure of a random weighted graph over n+m nodes
Instance gen_matrix_random_metric(std::size_t n, std::size_t m, std::uint32_t k, double r,
                                  std::uint64_t seed);

// dispatch by kind name used by the CLI:
// euclidean-uniform | euclidean-planted | matrix-random-metric
Instance generate_instance(const std::string& kind, std::size_t n, std::size_t m,
                           std::size_t dim, std::uint32_t k, double r, std::uint64_t seed);

} // namespace hybridkc
