#include "hybridkc/ball_intersection.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridkc {

namespace {

constexpr double kRatioTolerance = 1e-9;

void check_requests(const RequestSet& q, double eta) {
    if (q.requests.empty()) throw EmptyRequestError("ball intersection with no requests");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    for (const auto& r : q.requests) {
        if (!(r.radius > 0.0)) throw std::invalid_argument("request radius must be positive");
    }
}

} // namespace

DiscreteConstraintState::DiscreteConstraintState(const MetricSpace& space)
    : space_(&space), ratio_(space.facility_count(), 0.0), scratch_(space.facility_count()) {}

void DiscreteConstraintState::add(const Request& r) {
    space_->facility_distances(PointRef::client(r.point), scratch_);
    kernels::max_ratio_inplace(ratio_.data(), scratch_.data(), r.radius, ratio_.size());
    ++count_;
    last_ = r;
}

std::optional<Request> DiscreteConstraintState::last() const { return last_; }

DiscreteOutcome DiscreteConstraintState::best(double eta) const {
    if (count_ == 0) throw EmptyRequestError("ball intersection with no requests");
    if (ratio_.empty()) return Infeasible{std::numeric_limits<double>::infinity()};
    std::size_t arg = 0;
    for (std::size_t i = 1; i < ratio_.size(); ++i) {
        if (ratio_[i] < ratio_[arg]) arg = i;
    }
    if (ratio_[arg] <= 1.0 + eta + kRatioTolerance)
        return DiscreteBallResult{static_cast<FacilityIndex>(arg), ratio_[arg]};
    return Infeasible{ratio_[arg]};
}

DiscreteOutcome solve_discrete(const MetricSpace& space, const RequestSet& q, double eta) {
    check_requests(q, eta);
    DiscreteConstraintState state(space);
    for (const auto& r : q.requests) state.add(r);
    return state.best(eta);
}

EuclideanOutcome solve_euclidean(const MetricSpace& space, const RequestSet& q, double eta) {
    check_requests(q, eta);
    if (space.backend() != MetricBackend::Euclidean)
        throw InvalidPointError("solve_euclidean needs a euclidean space");

    const std::size_t dim = space.dim();
    const std::size_t nq = q.requests.size();

    // g(x) and an (arbitrary) active request index
    const auto evaluate = [&](const std::vector<double>& x, std::size_t& active) {
        double g = -1.0;
        for (std::size_t i = 0; i < nq; ++i) {
            const double d =
                space.distance_to_coords(PointRef::client(q.requests[i].point), x);
            const double ratio = d / q.requests[i].radius;
            if (ratio > g) {
                g = ratio;
                active = i;
            }
        }
        return g;
    };

    // start at the delta-weighted centroid of the request points
    std::vector<double> x(dim, 0.0);
    double weight_total = 0.0;
    for (const auto& r : q.requests) {
        const double w = 1.0 / r.radius;
        const auto coords = space.client_coords(r.point);
        for (std::size_t j = 0; j < dim; ++j) x[j] += w * coords[j];
        weight_total += w;
    }
    for (auto& v : x) v /= weight_total;

    std::size_t active = 0;
    double g = evaluate(x, active);
    std::vector<double> best_x = x;
    double best_g = g;

    const std::uint64_t budget =
        10ULL * static_cast<std::uint64_t>(std::ceil(1.0 / eta)) * nq;

    // The full budget is always spent: Polyak steps with target
    // best_g/(1+eta/2) drive best_g to within a 1+eta/2 factor of the
    // minimum, which both answers feasibility and keeps the returned value
    // near-optimal.
    for (std::uint64_t it = 0; it < budget && best_g > 0.0; ++it) {
        // Subgradient of g at x is the unit direction away from the active
        // request point, scaled by 1/delta; its norm is 1/delta.
        const auto& req = q.requests[active];
        const auto p = space.client_coords(req.point);
        const double d = space.distance_to_coords(PointRef::client(req.point), x);
        if (d == 0.0) break; // all requests colocated with x; g is already minimal there
        const double target = best_g / (1.0 + eta / 2.0);
        const double step = (g - target) * req.radius * req.radius; // (g - target)/||s||^2
        const double scale = step / (req.radius * d);
        for (std::size_t j = 0; j < dim; ++j) x[j] -= scale * (x[j] - p[j]);
        g = evaluate(x, active);
        if (g < best_g) {
            best_g = g;
            best_x = x;
        }
    }

    if (best_g <= 1.0 + eta + kRatioTolerance) return EuclideanBallResult{best_x, best_g};
    // lower-bound certificate: the minimum cannot be below best_g/(1+eta/2)
    if (best_g / (1.0 + eta / 2.0) > 1.0 + eta) return Infeasible{best_g};
    return BudgetExceeded{best_g};
}

} // namespace hybridkc
