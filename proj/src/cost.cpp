#include "hybridkc/cost.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hybridkc {

namespace {

void check_cost_args(const Solution& x, double z) {
    if (x.centers.empty()) throw EmptySolutionError("cost query against an empty solution");
    if (z < 1.0) throw std::invalid_argument("power z must be >= 1");
}

double center_distance(const MetricSpace& space, ClientIndex p, const Center& c) {
    if (c.is_facility())
        return space.distance(PointRef::client(p), PointRef::facility(c.facility_index()));
    return space.distance_to_coords(PointRef::client(p), c.coords());
}

} // namespace

double solution_distance(const MetricSpace& space, ClientIndex p, const Solution& x) {
    if (x.centers.empty()) throw EmptySolutionError("distance query against an empty solution");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : x.centers) {
        const double d = center_distance(space, p, c);
        if (d < best) best = d;
    }
    return best;
}

double solution_clamped_distance(const MetricSpace& space, ClientIndex p, const Solution& x,
                                 double alpha) {
    return clamped_distance(solution_distance(space, p, x), alpha);
}

void solution_distances(const MetricSpace& space, const Solution& x, std::span<double> out) {
    if (x.centers.empty()) throw EmptySolutionError("distance query against an empty solution");
    const std::size_t n = space.client_count();
    if (out.size() != n) throw InvalidPointError("output span size mismatch");

    std::vector<double> scratch(n);
    bool first = true;
    for (const auto& c : x.centers) {
        double* target = first ? out.data() : scratch.data();
        if (c.is_facility()) {
            space.client_distances(PointRef::facility(c.facility_index()), {target, n});
        } else {
            space.client_distances_from_coords(c.coords(), {target, n});
        }
        if (!first) kernels::min_inplace(out.data(), scratch.data(), n);
        first = false;
    }
}

double cost(const MetricSpace& space, const Solution& x, double alpha, double z) {
    check_cost_args(x, z);
    std::vector<double> dists(space.client_count());
    solution_distances(space, x, dists);
    return kernels::power_cost_sum(dists.data(), dists.size(), alpha, z);
}

double cost(const MetricSpace& space, const WeightedClientSet& clients, const Solution& x,
            double alpha, double z) {
    check_cost_args(x, z);
    std::vector<double> dists(space.client_count());
    solution_distances(space, x, dists);
    double acc = 0.0;
    for (const auto& m : clients.members) {
        const double v = clamped_distance(dists[m.client], alpha);
        if (v <= 0.0) continue;
        const double w = static_cast<double>(m.weight);
        if (z == 1.0) {
            acc += w * v;
        } else if (z == 2.0) {
            acc += w * (v * v);
        } else {
            acc += w * std::pow(v, z);
        }
    }
    return acc;
}

} // namespace hybridkc
