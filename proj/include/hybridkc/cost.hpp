#pragma once

// r-distances and the hybrid cost function: cost(P, X) = sum_p max(d(p,X) - alpha, 0)^z.
// alpha = 0 gives the k-median objective; alpha at the optimal k-center radius
// gives a zero-cost instance of the k-center objective.

#include "hybridkc/metric_space.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace hybridkc {

// A center is either a facility of the space or, in continuous Euclidean
// mode, a free coordinate vector.
struct Center {
    std::variant<FacilityIndex, std::vector<double>> where;

    static Center facility(FacilityIndex f) { return {f}; }
    static Center at(std::vector<double> coords) { return {std::move(coords)}; }

    bool is_facility() const { return std::holds_alternative<FacilityIndex>(where); }
    FacilityIndex facility_index() const { return std::get<FacilityIndex>(where); }
    std::span<const double> coords() const { return std::get<std::vector<double>>(where); }

    bool operator==(const Center&) const = default;
};

struct Solution {
    std::vector<Center> centers;

    bool operator==(const Solution&) const = default;
};

struct WeightedClient {
    ClientIndex client;
    std::uint64_t weight;
};

struct WeightedClientSet {
    std::vector<WeightedClient> members;

    std::uint64_t total_weight() const {
        std::uint64_t t = 0;
        for (const auto& m : members) t += m.weight;
        return t;
    }
};

// max(d - alpha, 0)
inline double clamped_distance(double d, double alpha) {
    const double v = d - alpha;
    return v > 0.0 ? v : 0.0;
}

// d(p, X): nearest concrete center. Throws EmptySolutionError on empty X.
double solution_distance(const MetricSpace& space, ClientIndex p, const Solution& x);

// max(d(p, X) - alpha, 0)
double solution_clamped_distance(const MetricSpace& space, ClientIndex p, const Solution& x,
                                 double alpha);

// out[i] = d(client i, X) for all clients (batched).
void solution_distances(const MetricSpace& space, const Solution& x, std::span<double> out);

// sum_p max(d(p,X) - alpha, 0)^z over all clients
double cost(const MetricSpace& space, const Solution& x, double alpha, double z = 1.0);

// weighted variant over a client subset
double cost(const MetricSpace& space, const WeightedClientSet& clients, const Solution& x,
            double alpha, double z = 1.0);

} // namespace hybridkc
