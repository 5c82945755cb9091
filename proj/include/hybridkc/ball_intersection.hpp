#pragma once

// Constraint solving for request sets: given demands (p, delta) that a center
// lie within delta of client p, find a center meeting every demand within a
// 1+eta factor, or report that none exists. Discrete spaces are solved by a
// full facility scan (incrementally maintained in the solver hot loop);
// continuous Euclidean spaces by subgradient descent on the max relative
// violation g(x) = max_(p,delta) ||x - p|| / delta.

#include "hybridkc/metric_space.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace hybridkc {

struct Request {
    ClientIndex point;
    double radius; // delta > 0
};

struct RequestSet {
    std::vector<Request> requests; // insertion order preserved for diagnostics
};

struct Infeasible {
    double best_ratio; // certified (discrete) or heuristic (continuous) lower bound witness
};

// Subgradient ran out of budget without certifying either outcome. Distinct
// from Infeasible: feasibility is still open.
struct BudgetExceeded {
    double best_ratio;
};

struct DiscreteBallResult {
    FacilityIndex facility;
    double ratio; // max over requests of d(facility, p) / delta
};

struct EuclideanBallResult {
    std::vector<double> point;
    double ratio;
};

using DiscreteOutcome = std::variant<DiscreteBallResult, Infeasible>;
using EuclideanOutcome = std::variant<EuclideanBallResult, Infeasible, BudgetExceeded>;

// Scan of every facility: returns the ratio minimizer (ties by smallest
// facility index) when its ratio is <= 1+eta, Infeasible otherwise.
DiscreteOutcome solve_discrete(const MetricSpace& space, const RequestSet& q, double eta);

EuclideanOutcome solve_euclidean(const MetricSpace& space, const RequestSet& q, double eta);

// Incremental form of solve_discrete for one growing request set: ratios are
// per-facility running maxima, so adding a request is O(m) and best() matches
// a from-scratch scan exactly.
class DiscreteConstraintState {
public:
    explicit DiscreteConstraintState(const MetricSpace& space);

    void add(const Request& r);
    std::optional<Request> last() const;
    std::size_t size() const { return count_; }

    DiscreteOutcome best(double eta) const;

private:
    const MetricSpace* space_;
    std::vector<double> ratio_;   // per facility, max over added requests
    std::vector<double> scratch_; // facility distances of the incoming request point
    std::size_t count_ = 0;
    std::optional<Request> last_;
};

} // namespace hybridkc
