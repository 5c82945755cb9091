#pragma once

// Shared test helpers: instance builders and independent reference
// implementations (oracles) kept deliberately separate from the library's
// code paths.

#include "hybridkc/ball_intersection.hpp"
#include "hybridkc/cost.hpp"
#include "hybridkc/instance.hpp"
#include "hybridkc/metric_space.hpp"
#include "hybridkc/rng.hpp"
#include "hybridkc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace testsupport {

using namespace hybridkc;

// Matrix space from 1-D positions (distance |a - b|), clients then facilities.
inline MetricSpace line_space(const std::vector<double>& clients,
                              const std::vector<double>& facilities) {
    const std::size_t s = clients.size() + facilities.size();
    std::vector<double> all(clients);
    all.insert(all.end(), facilities.begin(), facilities.end());
    std::vector<double> dist(s * s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) dist[i * s + j] = std::abs(all[i] - all[j]);
    return MetricSpace::matrix(clients.size(), facilities.size(), std::move(dist));
}

// ---- independent cost evaluation (plain loops, no kernel calls) ----

inline double plain_distance(const MetricSpace& space, ClientIndex p, const Center& c) {
    if (c.is_facility())
        return space.distance(PointRef::client(p), PointRef::facility(c.facility_index()));
    const auto x = space.client_coords(p);
    const auto y = c.coords();
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = y[j] - x[j];
        acc = acc + diff * diff;
    }
    return std::sqrt(acc);
}

inline double independent_kmedian_cost(const MetricSpace& space, const Solution& x) {
    double total = 0.0;
    for (std::size_t p = 0; p < space.client_count(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : x.centers) {
            const double d = plain_distance(space, static_cast<ClientIndex>(p), c);
            if (d < best) best = d;
        }
        total += best;
    }
    return total;
}

inline double independent_cost(const MetricSpace& space, const Solution& x, double alpha,
                               double z) {
    double total = 0.0;
    for (std::size_t p = 0; p < space.client_count(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : x.centers) {
            const double d = plain_distance(space, static_cast<ClientIndex>(p), c);
            if (d < best) best = d;
        }
        const double v = best - alpha;
        if (v > 0.0) total += z == 1.0 ? v : std::pow(v, z);
    }
    return total;
}

// ---- independent brute force over a permuted facility order ----

inline double independent_brute_force(const MetricSpace& space, std::uint32_t k, double r,
                                      double z, std::uint64_t perm_seed) {
    std::vector<FacilityIndex> order(space.facility_count());
    std::iota(order.begin(), order.end(), 0u);
    Xoshiro256PlusPlus rng(perm_seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);

    const std::uint32_t kk =
        static_cast<std::uint32_t>(std::min<std::size_t>(k, order.size()));
    double best = std::numeric_limits<double>::infinity();
    std::vector<FacilityIndex> pick(kk);

    const auto recurse = [&](auto&& self, std::size_t from, std::uint32_t depth) -> void {
        if (depth == kk) {
            Solution x;
            for (auto f : pick) x.centers.push_back(Center::facility(f));
            best = std::min(best, independent_cost(space, x, r, z));
            return;
        }
        for (std::size_t i = from; i < order.size(); ++i) {
            pick[depth] = order[i];
            self(self, i + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

// ---- independent facility scan for the discrete constraint solver ----

struct ScanResult {
    bool feasible;
    FacilityIndex facility;
    double ratio;
};

inline ScanResult reference_scan(const MetricSpace& space, const RequestSet& q, double eta) {
    double best = std::numeric_limits<double>::infinity();
    FacilityIndex arg = 0;
    for (std::size_t f = 0; f < space.facility_count(); ++f) {
        double worst = 0.0;
        for (const auto& req : q.requests) {
            const double d = space.distance(PointRef::facility(static_cast<FacilityIndex>(f)),
                                            PointRef::client(req.point));
            worst = std::max(worst, d / req.radius);
        }
        if (worst < best) {
            best = worst;
            arg = static_cast<FacilityIndex>(f);
        }
    }
    return {best <= 1.0 + eta + 1e-9, arg, best};
}

// ---- grid-search oracle for the continuous constraint solver ----

struct GridSearchResult {
    double min_ratio = std::numeric_limits<double>::infinity();
    double x = 0.0, y = 0.0;
};

// min over the step-grid on [lo, hi]^2 of max_(p,delta) ||x - p|| / delta
inline GridSearchResult grid_min_ratio(const MetricSpace& space, const RequestSet& q, double lo,
                                       double hi, double step) {
    GridSearchResult result;
    std::vector<std::array<double, 3>> reqs; // x, y, 1/delta^2
    for (const auto& r : q.requests) {
        const auto c = space.client_coords(r.point);
        reqs.push_back({c[0], c[1], 1.0 / (r.radius * r.radius)});
    }
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t iy = 0; iy < steps; ++iy) {
        const double y = lo + static_cast<double>(iy) * step;
        for (std::size_t ix = 0; ix < steps; ++ix) {
            const double x = lo + static_cast<double>(ix) * step;
            double worst = 0.0;
            for (const auto& [px, py, inv] : reqs) {
                const double dx = x - px;
                const double dy = y - py;
                const double v = (dx * dx + dy * dy) * inv;
                if (v > worst) worst = v;
            }
            if (worst < best_sq) {
                best_sq = worst;
                result.x = x;
                result.y = y;
            }
        }
    }
    result.min_ratio = std::sqrt(best_sq);
    return result;
}

// ---- consistency checking against a fixed optimal solution ----

// Requests per cluster, rebuilt from a trace plus the initial marked requests.
inline std::vector<RequestSet> requests_from_run(const SolverEngine& engine) {
    return engine.requests();
}

// True when relabeling pi makes every request (p, delta) in cluster i satisfy
// d(p, o_pi[i]) <= delta.
inline bool consistent_under(const MetricSpace& space, const std::vector<RequestSet>& requests,
                             const Solution& optimum, const std::vector<std::size_t>& pi) {
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (requests[i].requests.empty()) continue;
        if (pi[i] >= optimum.centers.size()) {
            // cluster with requests mapped past the optimal centers: only
            // acceptable if it has none
            return false;
        }
        for (const auto& req : requests[i].requests) {
            const double d = plain_distance(space, req.point, optimum.centers[pi[i]]);
            if (d > req.radius * (1.0 + 1e-12) + 1e-12) return false;
        }
    }
    return true;
}

inline std::optional<std::vector<std::size_t>> consistent_relabeling(
    const MetricSpace& space, const std::vector<RequestSet>& requests, const Solution& optimum) {
    std::vector<std::size_t> pi(requests.size());
    std::iota(pi.begin(), pi.end(), 0);
    // pad the permutation domain so k > |O| still works
    const std::size_t domain = std::max(requests.size(), optimum.centers.size());
    std::vector<std::size_t> perm(domain);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<std::size_t> head(perm.begin(), perm.begin() + requests.size());
        if (consistent_under(space, requests, optimum, head)) return head;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

} // namespace testsupport
