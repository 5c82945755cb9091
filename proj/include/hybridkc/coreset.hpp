#pragma once

// Weighted-coreset construction: an anchor set T (constant-factor solution
// plus a radius-r/2 net around each anchor) defines concentric rings around
// each anchor point; every client is associated to a cell of the smallest
// ring containing it, and one representative per nonempty cell carries the
// cell's client count as its weight. The weighted cost then tracks the true
// cost within a relative epsilon for every solution of size at most k.

#include "hybridkc/cost.hpp"
#include "hybridkc/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace hybridkc {

struct AnchorSet {
    std::vector<PointRef> points;
    // Certified factor with cost_r(P, T) <= alpha_bound * OPT_r; this is the
    // value fed to the ring/cell formulas (>= 1).
    double alpha_bound = 1.0;
    std::uint32_t gamma_bound = 1; // |T| <= gamma_bound * k
    double t_cost = 0.0;           // cost_r(P, T)
    // cost_r(P,T) / OPT_r measured against brute force; empty when the
    // enumeration budget ruled brute force out.
    std::optional<double> measured_ratio;
};

// Greedy net over the clients of the closed ball(center, big_radius): the
// lowest-index unassigned client opens a cell and absorbs every unassigned
// client within small_radius. Net points are pairwise > small_radius apart.
std::vector<std::pair<ClientIndex, std::vector<ClientIndex>>> net_decompose(
    const MetricSpace& space, PointRef center, double big_radius, double small_radius);

struct BuildTOptions {
    std::uint64_t seed = 0x5eedc0de;
    std::uint32_t base_repetitions = 24;
    double base_epsilon = 0.99;
};

// Anchor set of Algorithm-2: a constant-factor bicriteria base solution
// (greedy k-center seeding as fallback) plus radius-r/2 net representatives
// from P u F inside each anchor's 12r ball.
AnchorSet build_T(const MetricSpace& space, std::uint32_t k, double r,
                  const BuildTOptions& options = {});

struct CoresetDiagnostics {
    std::size_t rings_used = 0;
    std::size_t cells = 0;
    std::size_t uncovered_fallback = 0; // clients given singleton cells
    bool zero_cost_path = false;
    // max over clients of d(client, representative) / cell radius; the
    // greedy-net property bounds it by 2
    double worst_rep_distance_ratio = 0.0;
};

// Weighted client subset; total weight equals |P| exactly.
WeightedClientSet build_coreset(const MetricSpace& space, std::uint32_t k, double r,
                                double epsilon, const AnchorSet& anchors,
                                CoresetDiagnostics* diagnostics = nullptr);

// min over t in T of d(p, t) for every client p
void anchor_distances(const MetricSpace& space, const std::vector<PointRef>& anchors,
                      std::vector<double>& out);

} // namespace hybridkc
