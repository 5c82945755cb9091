#pragma once

// Randomized bicriteria search. For a guess G of the optimal cost, the engine
// computes per-client upper bounds u(p) from ball-density counting, marks a
// disjoint witness core, initializes one constrained center per marked point,
// and then alternates: sample a client (nearby or faraway branch, chosen by a
// fair coin) proportional to its inflated-radius cost contribution, attach the
// request (p, d(p,X)/(1+eps/12)) to a uniformly random cluster, and recompute
// that cluster's center through the ball-intersection solver at error eps/40.
// The loop stops once cost at radius r' = r(1+eps/3) drops to (1+eps)*G.
// The driver sweeps G over a geometric grid and repeats each guess with
// independently derived seeds.

#include "hybridkc/ball_intersection.hpp"
#include "hybridkc/cost.hpp"
#include "hybridkc/errors.hpp"
#include "hybridkc/metric_space.hpp"
#include "hybridkc/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hybridkc {

struct SolverConfig {
    double epsilon = 0.5;            // in (0, 1)
    std::uint64_t iteration_cap = 0; // 0 -> default_iteration_cap(k, epsilon)
    std::uint32_t repetitions = 1;
    std::uint64_t seed = 0;
    double guess_multiplier = 0.0; // 0 -> 1 + epsilon/3
    double z = 1.0;
    std::optional<double> forced_guess;     // run a single externally supplied G
    std::vector<double> client_weights;     // optional sampling weights (norm-objective hook)
    bool record_traces = false;             // keep per-repetition iteration traces
};

// Stand-in for the metric-class factor in the iteration bound; exceeding it
// fails the repetition, never the program.
std::uint64_t default_iteration_cap(std::uint32_t k, double epsilon);

// u(p) = 3 * min{alpha > r : |ball(p, alpha)| >= G/alpha}, minimized exactly
// over the candidate set {client distances > r} u {G/i > r} u {r*(1+1e-9)}.
// Throws GuessTooLargeError when no alpha qualifies.
std::vector<double> compute_upper_bounds(const MetricSpace& space, double guess, double r);

// Clients in nondecreasing u(p) order (ties by index); p is marked iff its
// u-ball is center-distance disjoint from every previously marked ball.
std::vector<ClientIndex> greedy_mark(const MetricSpace& space, std::span<const double> u);

enum class FailureReason {
    BallIntersectionFail,
    IterationCap,
    TooManyMarks,
    EmptySampleSet,
    GuessTooLarge,
};

const char* failure_reason_name(FailureReason r);

struct IterationRecord {
    std::uint64_t iteration = 0;
    bool nearby_branch = false;
    bool sampled = false;  // false: the chosen branch had zero total mass
    ClientIndex client = 0;
    std::uint32_t cluster = 0;
    double delta = 0.0;    // request radius delta_p
    double distance = 0.0; // d(p, X) when the request was formed
    bool accepted = false; // center recomputation succeeded
};

// Precomputed per-guess data shared across repetitions.
struct GuessPrecompute {
    std::vector<double> upper_bounds;
    std::vector<ClientIndex> marked;
};

class SolverEngine {
public:
    enum class Status { Running, Satisfied, Failed };

    SolverEngine(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                 double guess, std::uint64_t seed, double z = 1.0,
                 std::span<const double> client_weights = {}, bool record_trace = false,
                 std::shared_ptr<const GuessPrecompute> precomputed = nullptr);

    Status initialize();
    Status step(); // one loop body; no-op unless Running

    Status status() const { return status_; }
    FailureReason failure_reason() const { return failure_; }
    std::uint64_t iterations() const { return iterations_; }

    double inflated_radius() const { return inflated_r_; }
    double current_cost() const { return cost_; }
    double threshold() const { return threshold_; }

    std::span<const double> upper_bounds() const { return precompute_->upper_bounds; }
    std::span<const ClientIndex> marked() const { return precompute_->marked; }
    const std::vector<RequestSet>& requests() const { return requests_; }
    std::span<const double> distances_to_solution() const { return dmin_; }
    const std::vector<IterationRecord>& trace() const { return trace_; }
    std::vector<IterationRecord> take_trace() { return std::move(trace_); }

    // Concrete centers in cluster order (clusters with empty request sets
    // contribute nothing until their first request arrives).
    Solution solution() const;

private:
    Status fail(FailureReason reason);
    bool recompute_center(std::uint32_t cluster);
    void refresh_distances();
    void refresh_cost();

    const MetricSpace* space_;
    std::uint32_t k_;
    double r_;
    double epsilon_;
    double guess_;
    double z_;
    double inflated_r_;
    double threshold_;
    double eta_;
    bool record_trace_;

    std::shared_ptr<const GuessPrecompute> precompute_;
    Xoshiro256PlusPlus rng_;
    std::vector<double> weights_;

    std::vector<RequestSet> requests_;
    std::vector<std::optional<Center>> centers_;
    std::vector<DiscreteConstraintState> constraints_; // discrete spaces only
    std::vector<std::vector<double>> center_dists_;
    std::vector<double> dmin_;
    std::vector<double> clamped_;
    std::vector<double> mass_;

    double cost_ = 0.0;
    std::uint64_t iterations_ = 0;
    Status status_ = Status::Running;
    FailureReason failure_ = FailureReason::BallIntersectionFail;
    std::vector<IterationRecord> trace_;
};

struct GuessSuccess {
    Solution solution;
    double cost_at_inflated_radius = 0.0;
    std::uint64_t iterations = 0;
};

struct GuessFailure {
    FailureReason reason;
    std::uint64_t iterations = 0;
};

struct GuessOutcome {
    double guess = 0.0;
    std::variant<GuessSuccess, GuessFailure> result;
    std::vector<IterationRecord> trace; // populated when tracing was requested

    bool success() const { return std::holds_alternative<GuessSuccess>(result); }
};

// One full Algorithm run for a fixed guess.
GuessOutcome run_single(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                        double guess, std::uint64_t seed, std::uint64_t iteration_cap,
                        double z = 1.0, std::span<const double> client_weights = {},
                        bool record_trace = false,
                        std::shared_ptr<const GuessPrecompute> precomputed = nullptr);

struct GuessReport {
    double guess = 0.0;
    std::size_t marked_count = 0;
    std::uint32_t successes = 0;
    std::uint32_t failures_ball_intersection = 0;
    std::uint32_t failures_iteration_cap = 0;
    std::uint32_t failures_empty_sample = 0;
    bool rejected_too_many_marks = false;
    bool rejected_guess_too_large = false;
    std::uint64_t total_iterations = 0;
    std::optional<double> best_cost;
};

struct SolveReport {
    std::vector<GuessReport> per_guess;
    double guess_lower = 0.0;
    double guess_upper = 0.0;
    std::uint32_t repetitions = 0;
    bool single_center_shortcut = false; // cost-0 one-center instance
};

struct SolveResult {
    Solution best;
    double best_cost = 0.0;   // at radius (1 + eps/3) * r
    double radius_used = 0.0; // (1 + eps/3) * r
    SolveReport report;
    std::vector<IterationRecord> best_trace;
    double best_guess = 0.0;
    std::uint64_t best_seed = 0;
};

struct NoSolutionFoundError : Error {
    explicit NoSolutionFoundError(SolveReport r)
        : Error("no guess produced a feasible solution"), report(std::move(r)) {}
    SolveReport report;
};

struct GuessGrid {
    std::vector<double> guesses;
    double lower = 0.0;
    double upper = 0.0;
    Solution one_center;       // the solution realizing the upper bound
    bool upper_is_zero = false; // zero-cost single-center instance
};

// Geometric guess grid {L * mult^j} from the cost lower bound L up to (and
// one step past) the single-center upper bound U.
GuessGrid guess_grid(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                     double z = 1.0, double multiplier = 0.0);

SolveResult solve(const MetricSpace& space, std::uint32_t k, double r, const SolverConfig& config);

// -------- scattering diagnostics --------

struct ClusterScatterReport {
    std::uint32_t cluster = 0;
    std::vector<double> nearby_radii;
    std::vector<double> faraway_radii;
    double far_interval_low = 0.0;  // r_min: smallest radius above 8r/eps
    double far_interval_high = 0.0; // (1e5 k / eps^2) * r_min
    std::size_t sequence_length = 0;
    std::size_t violations = 0;
    std::size_t faraway_in_near_interval = 0; // informational
};

struct ScatterReport {
    std::vector<ClusterScatterReport> clusters;
    std::size_t total_violations = 0;
};

ScatterReport scatter_diagnostics(std::span<const IterationRecord> trace, double epsilon,
                                  std::uint32_t k, double r);

} // namespace hybridkc
