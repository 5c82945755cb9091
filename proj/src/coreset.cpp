#include "hybridkc/coreset.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/kernels.hpp"
#include "hybridkc/oracle.hpp"
#include "hybridkc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace hybridkc {

namespace {

struct GreedyNet {
    std::vector<ClientIndex> net_points;
    std::vector<std::uint32_t> assignment; // per member, index into net_points
};

// members must be ascending; greedy by lowest index
GreedyNet greedy_net_clients(const MetricSpace& space, const std::vector<ClientIndex>& members,
                             double radius) {
    GreedyNet net;
    net.assignment.assign(members.size(), UINT32_MAX);
    std::vector<double> dists(space.client_count());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (net.assignment[i] != UINT32_MAX) continue;
        const auto cell = static_cast<std::uint32_t>(net.net_points.size());
        net.net_points.push_back(members[i]);
        space.client_distances(PointRef::client(members[i]), dists);
        for (std::size_t j = i; j < members.size(); ++j) {
            if (net.assignment[j] == UINT32_MAX && dists[members[j]] <= radius)
                net.assignment[j] = cell;
        }
    }
    return net;
}

} // namespace

void anchor_distances(const MetricSpace& space, const std::vector<PointRef>& anchors,
                      std::vector<double>& out) {
    const std::size_t n = space.client_count();
    out.assign(n, std::numeric_limits<double>::infinity());
    std::vector<double> row(n);
    bool first = true;
    for (const auto& t : anchors) {
        space.client_distances(t, first ? std::span<double>(out) : std::span<double>(row));
        if (!first) kernels::min_inplace(out.data(), row.data(), n);
        first = false;
    }
}

std::vector<std::pair<ClientIndex, std::vector<ClientIndex>>> net_decompose(
    const MetricSpace& space, PointRef center, double big_radius, double small_radius) {
    if (!(small_radius > 0.0) || small_radius > big_radius)
        throw std::invalid_argument("need 0 < small_radius <= big_radius");

    const auto members = space.ball(center, big_radius);
    const auto net = greedy_net_clients(space, members, small_radius);

    std::vector<std::pair<ClientIndex, std::vector<ClientIndex>>> cells;
    cells.reserve(net.net_points.size());
    for (ClientIndex p : net.net_points) cells.emplace_back(p, std::vector<ClientIndex>{});
    for (std::size_t i = 0; i < members.size(); ++i)
        cells[net.assignment[i]].second.push_back(members[i]);
    return cells;
}

namespace {

// Gonzalez-style fallback base: best 1-center facility, then repeatedly the
// facility closest to the farthest client.
std::vector<FacilityIndex> greedy_kcenter_seed(const MetricSpace& space, std::uint32_t k) {
    const std::size_t n = space.client_count();
    const std::size_t m = space.facility_count();
    std::vector<FacilityIndex> seed;
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    std::vector<double> row(n);
    std::vector<double> frow(m);
    std::vector<bool> used(m, false);

    // first: minimize the 1-center radius
    double best = std::numeric_limits<double>::infinity();
    FacilityIndex arg = 0;
    for (std::size_t f = 0; f < m; ++f) {
        space.client_distances(PointRef::facility(static_cast<FacilityIndex>(f)), row);
        const double radius = kernels::max_value(row.data(), n);
        if (radius < best) {
            best = radius;
            arg = static_cast<FacilityIndex>(f);
        }
    }
    seed.push_back(arg);
    used[arg] = true;
    space.client_distances(PointRef::facility(arg), dmin);

    while (seed.size() < k && seed.size() < m) {
        std::size_t far_client = 0;
        for (std::size_t p = 1; p < n; ++p) {
            if (dmin[p] > dmin[far_client]) far_client = p;
        }
        double nearest = std::numeric_limits<double>::infinity();
        FacilityIndex pick = 0;
        bool found = false;
        space.facility_distances(PointRef::client(static_cast<ClientIndex>(far_client)), frow);
        for (std::size_t f = 0; f < m; ++f) {
            if (used[f]) continue;
            if (frow[f] < nearest) {
                nearest = frow[f];
                pick = static_cast<FacilityIndex>(f);
                found = true;
            }
        }
        if (!found) break;
        seed.push_back(pick);
        used[pick] = true;
        std::vector<double> prow(n);
        space.client_distances(PointRef::facility(pick), prow);
        kernels::min_inplace(dmin.data(), prow.data(), n);
    }
    return seed;
}

double anchor_cost(const MetricSpace& space, const std::vector<PointRef>& anchors, double r) {
    std::vector<double> dists;
    anchor_distances(space, anchors, dists);
    return kernels::power_cost_sum(dists.data(), dists.size(), r, 1.0);
}

} // namespace

AnchorSet build_T(const MetricSpace& space, std::uint32_t k, double r,
                  const BuildTOptions& options) {
    if (!space.discrete())
        throw TooLargeError("anchor construction needs a discrete facility set");

    // constant-factor base solution
    std::vector<PointRef> base;
    SolverConfig cfg;
    cfg.epsilon = options.base_epsilon;
    cfg.repetitions = options.base_repetitions;
    cfg.seed = options.seed;
    try {
        const auto result = solve(space, k, r, cfg);
        for (const auto& c : result.best.centers)
            base.push_back(PointRef::facility(c.facility_index()));
    } catch (const NoSolutionFoundError&) {
        for (FacilityIndex f : greedy_kcenter_seed(space, k)) base.push_back(PointRef::facility(f));
    }

    AnchorSet anchors;
    anchors.points = base;

    if (r > 0.0) {
        // net each anchor's 12r ball at radius r/2 over P u F
        std::vector<double> client_row(space.client_count());
        std::vector<double> facility_row(space.facility_count());
        for (const auto& a : base) {
            std::vector<PointRef> universe;
            space.client_distances(a, client_row);
            for (std::size_t p = 0; p < client_row.size(); ++p) {
                if (client_row[p] <= 12.0 * r)
                    universe.push_back(PointRef::client(static_cast<ClientIndex>(p)));
            }
            space.facility_distances(a, facility_row);
            for (std::size_t f = 0; f < facility_row.size(); ++f) {
                if (facility_row[f] <= 12.0 * r)
                    universe.push_back(PointRef::facility(static_cast<FacilityIndex>(f)));
            }

            // greedy net at radius r/2: first unassigned member opens a cell
            std::vector<bool> assigned(universe.size(), false);
            std::vector<double> dists(universe.size());
            for (std::size_t i = 0; i < universe.size(); ++i) {
                if (assigned[i]) continue;
                for (std::size_t j = i; j < universe.size(); ++j) {
                    if (!assigned[j] &&
                        space.distance(universe[i], universe[j]) <= r / 2.0)
                        assigned[j] = true;
                }
                anchors.points.push_back(universe[i]);
            }
        }
    }

    // dedupe, preserving insertion order (base anchors first)
    std::vector<PointRef> unique;
    for (const auto& p : anchors.points) {
        if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
    }
    anchors.points = std::move(unique);

    anchors.t_cost = anchor_cost(space, anchors.points, r);
    anchors.gamma_bound = static_cast<std::uint32_t>(
        (anchors.points.size() + k - 1) / k);

    // certify alpha against brute force when the budget allows
    bool certified = false;
    try {
        const auto oracle = brute_force(space, k, r, 1.0);
        if (oracle.opt_cost > 0.0) {
            anchors.measured_ratio = anchors.t_cost / oracle.opt_cost;
            // the cell-displacement factor: two points of a radius-rho cell
            // can be 2*rho apart, which a doubled alpha absorbs
            anchors.alpha_bound = std::max(1.0, 2.0 * *anchors.measured_ratio);
            certified = true;
        } else if (anchors.t_cost == 0.0) {
            anchors.measured_ratio = 1.0;
            anchors.alpha_bound = 1.0;
            certified = true;
        }
        // opt == 0 with t_cost > 0: no finite ratio exists; fall through
    } catch (const TooLargeError&) {
    }
    if (!certified) anchors.alpha_bound = 36.0;

    return anchors;
}

WeightedClientSet build_coreset(const MetricSpace& space, std::uint32_t k, double r,
                                double epsilon, const AnchorSet& anchors,
                                CoresetDiagnostics* diagnostics) {
    (void)k;
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0,1)");
    if (anchors.points.empty()) throw std::invalid_argument("empty anchor set");
    if (anchors.alpha_bound < 1.0) throw std::invalid_argument("alpha bound below 1");

    const std::size_t n = space.client_count();
    CoresetDiagnostics local;
    CoresetDiagnostics& diag = diagnostics ? *diagnostics : local;

    std::vector<double> anchor_dist;
    anchor_distances(space, anchors.points, anchor_dist);
    const double t_cost =
        kernels::power_cost_sum(anchor_dist.data(), anchor_dist.size(), r, 1.0);

    WeightedClientSet coreset;

    if (t_cost == 0.0) {
        // Zero-cost anchors admit an exactly faithful coreset: collapse
        // clients by zero-distance identity; weighted and true costs then
        // agree for every solution.
        diag.zero_cost_path = true;
        std::vector<bool> grouped(n, false);
        std::vector<double> dists(n);
        for (std::size_t p = 0; p < n; ++p) {
            if (grouped[p]) continue;
            space.client_distances(PointRef::client(static_cast<ClientIndex>(p)), dists);
            std::uint64_t weight = 0;
            for (std::size_t q = p; q < n; ++q) {
                if (!grouped[q] && dists[q] == 0.0) {
                    grouped[q] = true;
                    ++weight;
                }
            }
            coreset.members.push_back({static_cast<ClientIndex>(p), weight});
        }
        return coreset;
    }

    const double alpha = anchors.alpha_bound;
    const double ring_unit = t_cost / (alpha * static_cast<double>(n)); // R
    const auto jmax = static_cast<std::uint32_t>(std::ceil(
        2.0 * std::log2(std::ceil(alpha * static_cast<double>(n)))));
    diag.rings_used = jmax + 1;

    // distances to each anchor (|T| rows of n)
    std::vector<std::vector<double>> anchor_rows(anchors.points.size());
    for (std::size_t t = 0; t < anchors.points.size(); ++t) {
        anchor_rows[t].resize(n);
        space.client_distances(anchors.points[t], anchor_rows[t]);
    }

    const auto ring_radius = [&](std::uint32_t j) {
        return r + std::ldexp(ring_unit, static_cast<int>(j)); // r + 2^j R
    };
    const auto cell_radius = [&](std::uint32_t j) {
        return epsilon * std::ldexp(ring_unit, static_cast<int>(j)) / (4.0 * alpha);
    };

    // associate every client to the smallest containing ring (ties: smallest
    // anchor index); anything numerically past the outermost ring becomes its
    // own singleton cell
    struct Association {
        std::uint32_t anchor = 0;
        std::uint32_t ring = 0;
        bool covered = false;
    };
    std::vector<Association> assoc(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::uint32_t j = 0; j <= jmax && !assoc[p].covered; ++j) {
            const double radius = ring_radius(j);
            for (std::size_t t = 0; t < anchors.points.size(); ++t) {
                if (anchor_rows[t][p] <= radius) {
                    assoc[p] = {static_cast<std::uint32_t>(t), j, true};
                    break;
                }
            }
        }
        if (!assoc[p].covered) ++diag.uncovered_fallback;
    }

    // group clients by (anchor, ring); each group shares its ring's net
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<ClientIndex>> groups;
    for (std::size_t p = 0; p < n; ++p) {
        if (assoc[p].covered)
            groups[{assoc[p].anchor, assoc[p].ring}].push_back(static_cast<ClientIndex>(p));
        else
            coreset.members.push_back({static_cast<ClientIndex>(p), 1});
    }

    for (const auto& [key, group] : groups) {
        const auto [anchor, ring] = key;
        const double radius = ring_radius(ring);

        std::vector<ClientIndex> ball_members;
        for (std::size_t p = 0; p < n; ++p) {
            if (anchor_rows[anchor][p] <= radius)
                ball_members.push_back(static_cast<ClientIndex>(p));
        }
        const auto net = greedy_net_clients(space, ball_members, cell_radius(ring));

        std::unordered_map<ClientIndex, std::uint32_t> cell_of;
        cell_of.reserve(ball_members.size());
        for (std::size_t i = 0; i < ball_members.size(); ++i)
            cell_of[ball_members[i]] = net.assignment[i];

        // representative: smallest associated client per nonempty cell
        std::map<std::uint32_t, std::pair<ClientIndex, std::uint64_t>> cells;
        for (ClientIndex p : group) {
            const std::uint32_t cell = cell_of.at(p);
            auto [it, fresh] = cells.try_emplace(cell, p, 0);
            if (!fresh && p < it->second.first) it->second.first = p;
            ++it->second.second;
        }
        for (const auto& [cell, entry] : cells) {
            coreset.members.push_back({entry.first, entry.second});
            ++diag.cells;
        }
        for (ClientIndex p : group) {
            const ClientIndex rep = cells.at(cell_of.at(p)).first;
            const double d =
                space.distance(PointRef::client(p), PointRef::client(rep));
            diag.worst_rep_distance_ratio =
                std::max(diag.worst_rep_distance_ratio, d / cell_radius(ring));
        }
    }

    std::sort(coreset.members.begin(), coreset.members.end(),
              [](const WeightedClient& a, const WeightedClient& b) {
                  return a.client < b.client;
              });
    return coreset;
}

} // namespace hybridkc
