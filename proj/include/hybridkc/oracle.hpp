#pragma once

// Exact brute-force reference optima over facility subsets, used as ground
// truth by the test and acceptance suites. Discrete backends only; continuous
// instances are certified against their finite facility list (grid-restricted).

#include "hybridkc/cost.hpp"
#include "hybridkc/metric_space.hpp"

#include <cstdint>
#include <string>

namespace hybridkc {

struct OracleResult {
    double opt_cost = 0.0;
    Solution opt_solution;
    std::uint64_t enumerated_count = 0;
};

// Exact minimum of cost(P, X, r, z) over all facility subsets of size
// min(k, |F|); ties broken by lexicographically smallest subset.
// Throws TooLargeError when C(|F|, k) exceeds the enumeration budget (1e7).
OracleResult brute_force(const MetricSpace& space, std::uint32_t k, double r, double z = 1.0);

// Exact optimal k-center radius: min over k-subsets of max_p d(p, X).
double kcenter_radius(const MetricSpace& space, std::uint32_t k);

struct BicriteriaCheck {
    bool ok = false;
    double cost_at_inflated_radius = 0.0;
    double bound = 0.0;
    std::string detail;
};

// |X| <= k and cost(P, X, (1+eps)r, z) <= (1+eps) * opt_cost, with 1e-9 slack.
BicriteriaCheck verify_bicriteria(const MetricSpace& space, const Solution& x, std::uint32_t k,
                                  double r, double epsilon, double opt_cost, double z = 1.0);

} // namespace hybridkc
