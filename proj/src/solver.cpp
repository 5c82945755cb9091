#include "hybridkc/solver.hpp"

#include "hybridkc/kernels.hpp"
#include "hybridkc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hybridkc {

namespace {
constexpr double kTol = 1e-9;
}

std::uint64_t default_iteration_cap(std::uint32_t k, double epsilon) {
    const double ke = static_cast<double>(k) / epsilon;
    return static_cast<std::uint64_t>(
        std::ceil(40.0 * ke * std::log(ke + std::exp(1.0)) * 100.0));
}

std::vector<double> compute_upper_bounds(const MetricSpace& space, double guess, double r) {
    if (!(guess > 0.0)) throw std::invalid_argument("guess must be positive");
    const std::size_t n = space.client_count();
    std::vector<double> u(n);
    std::vector<double> dists(n);
    std::vector<double> candidates;

    for (std::size_t p = 0; p < n; ++p) {
        space.client_distances(PointRef::client(static_cast<ClientIndex>(p)), dists);
        std::vector<double> sorted(dists);
        std::sort(sorted.begin(), sorted.end());

        candidates.clear();
        candidates.push_back(r * (1.0 + 1e-9));
        for (double d : sorted) {
            if (d > r) candidates.push_back(d);
        }
        for (std::size_t i = 1; i <= n; ++i) {
            const double c = guess / static_cast<double>(i);
            if (c > r) candidates.push_back(c);
        }
        std::sort(candidates.begin(), candidates.end());

        // |ball(p, a)| * a is nondecreasing in a, so the first qualifying
        // candidate is the minimum.
        double alpha_star = -1.0;
        for (double a : candidates) {
            if (!(a > 0.0)) continue;
            const auto count = static_cast<double>(
                std::upper_bound(sorted.begin(), sorted.end(), a) - sorted.begin());
            if (count * a >= guess - kTol) {
                alpha_star = a;
                break;
            }
        }
        if (alpha_star < 0.0)
            throw GuessTooLargeError("no ball density supports guess " + std::to_string(guess));
        u[p] = 3.0 * alpha_star;
    }
    return u;
}

std::vector<ClientIndex> greedy_mark(const MetricSpace& space, std::span<const double> u) {
    const std::size_t n = space.client_count();
    if (u.size() != n) throw std::invalid_argument("upper bound vector size mismatch");

    std::vector<ClientIndex> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](ClientIndex a, ClientIndex b) {
        if (u[a] != u[b]) return u[a] < u[b];
        return a < b;
    });

    std::vector<ClientIndex> marked;
    for (ClientIndex p : order) {
        bool disjoint = true;
        for (ClientIndex q : marked) {
            const double d = space.distance(PointRef::client(p), PointRef::client(q));
            if (d <= u[p] + u[q] + kTol) {
                disjoint = false;
                break;
            }
        }
        if (disjoint) marked.push_back(p);
    }
    return marked;
}

const char* failure_reason_name(FailureReason r) {
    switch (r) {
    case FailureReason::BallIntersectionFail: return "ball-intersection-fail";
    case FailureReason::IterationCap: return "iteration-cap";
    case FailureReason::TooManyMarks: return "too-many-marks";
    case FailureReason::EmptySampleSet: return "empty-sample-set";
    case FailureReason::GuessTooLarge: return "guess-too-large";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// SolverEngine
// ---------------------------------------------------------------------------

SolverEngine::SolverEngine(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                           double guess, std::uint64_t seed, double z,
                           std::span<const double> client_weights, bool record_trace,
                           std::shared_ptr<const GuessPrecompute> precomputed)
    : space_(&space),
      k_(k),
      r_(r),
      epsilon_(epsilon),
      guess_(guess),
      z_(z),
      inflated_r_(r * (1.0 + epsilon / 3.0)),
      threshold_((1.0 + epsilon) * guess),
      eta_(epsilon / 40.0),
      record_trace_(record_trace),
      precompute_(std::move(precomputed)),
      rng_(seed) {
    if (k_ < 1) throw std::invalid_argument("k must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
    if (!(guess > 0.0)) throw std::invalid_argument("guess must be positive");
    if (z < 1.0) throw std::invalid_argument("z must be >= 1");
    if (!client_weights.empty()) {
        if (client_weights.size() != space.client_count())
            throw std::invalid_argument("client weight vector size mismatch");
        weights_.assign(client_weights.begin(), client_weights.end());
    }
}

SolverEngine::Status SolverEngine::fail(FailureReason reason) {
    status_ = Status::Failed;
    failure_ = reason;
    return status_;
}

SolverEngine::Status SolverEngine::initialize() {
    const std::size_t n = space_->client_count();

    if (!precompute_) {
        auto pre = std::make_shared<GuessPrecompute>();
        try {
            pre->upper_bounds = compute_upper_bounds(*space_, guess_, r_);
        } catch (const GuessTooLargeError&) {
            precompute_ = std::move(pre);
            return fail(FailureReason::GuessTooLarge);
        }
        pre->marked = greedy_mark(*space_, pre->upper_bounds);
        precompute_ = std::move(pre);
    }
    if (precompute_->upper_bounds.empty()) return fail(FailureReason::GuessTooLarge);
    if (precompute_->marked.size() > k_) return fail(FailureReason::TooManyMarks);

    requests_.assign(k_, RequestSet{});
    centers_.assign(k_, std::nullopt);
    center_dists_.assign(k_, {});
    if (space_->discrete()) constraints_.assign(k_, DiscreteConstraintState(*space_));
    dmin_.assign(n, std::numeric_limits<double>::infinity());
    clamped_.assign(n, 0.0);
    mass_.assign(n, 0.0);

    const auto& u = precompute_->upper_bounds;
    for (std::size_t i = 0; i < precompute_->marked.size(); ++i) {
        const ClientIndex p = precompute_->marked[i];
        requests_[i].requests.push_back(Request{p, u[p]});
        if (space_->discrete()) constraints_[i].add(requests_[i].requests.back());
        if (!recompute_center(static_cast<std::uint32_t>(i)))
            return fail(FailureReason::BallIntersectionFail);
    }

    refresh_distances();
    refresh_cost();
    status_ = cost_ > threshold_ ? Status::Running : Status::Satisfied;
    return status_;
}

bool SolverEngine::recompute_center(std::uint32_t cluster) {
    if (space_->discrete()) {
        const auto outcome = constraints_[cluster].best(eta_);
        if (const auto* res = std::get_if<DiscreteBallResult>(&outcome)) {
            const Center c = Center::facility(res->facility);
            if (!centers_[cluster] || !(*centers_[cluster] == c)) {
                centers_[cluster] = c;
                center_dists_[cluster].resize(space_->client_count());
                space_->client_distances(PointRef::facility(res->facility),
                                         center_dists_[cluster]);
            }
            return true;
        }
        return false;
    }

    const auto outcome = solve_euclidean(*space_, requests_[cluster], eta_);
    if (const auto* res = std::get_if<EuclideanBallResult>(&outcome)) {
        centers_[cluster] = Center::at(res->point);
        center_dists_[cluster].resize(space_->client_count());
        space_->client_distances_from_coords(res->point, center_dists_[cluster]);
        return true;
    }
    return false;
}

void SolverEngine::refresh_distances() {
    const std::size_t n = space_->client_count();
    bool first = true;
    for (std::uint32_t i = 0; i < k_; ++i) {
        if (!centers_[i]) continue;
        if (first) {
            std::copy(center_dists_[i].begin(), center_dists_[i].end(), dmin_.begin());
            first = false;
        } else {
            kernels::min_inplace(dmin_.data(), center_dists_[i].data(), n);
        }
    }
    kernels::clamp_shift(dmin_.data(), n, inflated_r_, clamped_.data());
}

void SolverEngine::refresh_cost() {
    cost_ = kernels::power_cost_sum(dmin_.data(), dmin_.size(), inflated_r_, z_);
}

SolverEngine::Status SolverEngine::step() {
    if (status_ != Status::Running) return status_;
    ++iterations_;

    IterationRecord rec;
    rec.iteration = iterations_;

    const bool nearby = rng_.next_double() < 0.5;
    rec.nearby_branch = nearby;

    // masses proportional to the inflated-radius contribution, restricted to
    // the branch set (optionally reweighted through the sampling hook)
    const std::size_t n = space_->client_count();
    const auto& u = precompute_->upper_bounds;
    const double near_limit = 8.0 * r_ / epsilon_ + kTol;
    const double far_factor = epsilon_ / (1000.0 * static_cast<double>(k_));
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const bool in_set = nearby ? dmin_[p] <= near_limit : clamped_[p] > far_factor * u[p];
        double m = 0.0;
        if (in_set) {
            m = clamped_[p];
            if (!weights_.empty()) m *= weights_[p];
        }
        mass_[p] = m;
        total += m;
    }

    if (!(total > 0.0)) {
        if (record_trace_) trace_.push_back(rec);
        return fail(FailureReason::EmptySampleSet);
    }

    // inverse-CDF draw over exact prefix sums
    const double x = rng_.next_double() * total;
    std::size_t chosen = n - 1;
    double prefix = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        prefix += mass_[p];
        if (prefix > x) {
            chosen = p;
            break;
        }
    }

    const auto cluster = static_cast<std::uint32_t>(rng_.next_below(k_));
    const double dist = dmin_[chosen];
    const double delta = dist / (1.0 + epsilon_ / 12.0);

    rec.sampled = true;
    rec.client = static_cast<ClientIndex>(chosen);
    rec.cluster = cluster;
    rec.delta = delta;
    rec.distance = dist;

    requests_[cluster].requests.push_back(Request{static_cast<ClientIndex>(chosen), delta});
    if (space_->discrete()) constraints_[cluster].add(requests_[cluster].requests.back());

    if (!recompute_center(cluster)) {
        if (record_trace_) trace_.push_back(rec);
        return fail(FailureReason::BallIntersectionFail);
    }

    rec.accepted = true;
    if (record_trace_) trace_.push_back(rec);

    refresh_distances();
    refresh_cost();
    status_ = cost_ > threshold_ ? Status::Running : Status::Satisfied;
    return status_;
}

Solution SolverEngine::solution() const {
    Solution sol;
    for (const auto& c : centers_) {
        if (c) sol.centers.push_back(*c);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// run_single / solve
// ---------------------------------------------------------------------------

GuessOutcome run_single(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                        double guess, std::uint64_t seed, std::uint64_t iteration_cap,
                        double z, std::span<const double> client_weights, bool record_trace,
                        std::shared_ptr<const GuessPrecompute> precomputed) {
    if (iteration_cap == 0) iteration_cap = default_iteration_cap(k, epsilon);

    SolverEngine engine(space, k, r, epsilon, guess, seed, z, client_weights, record_trace,
                        std::move(precomputed));
    GuessOutcome outcome;
    outcome.guess = guess;

    auto status = engine.initialize();
    while (status == SolverEngine::Status::Running && engine.iterations() < iteration_cap) {
        status = engine.step();
    }

    if (status == SolverEngine::Status::Satisfied) {
        outcome.result = GuessSuccess{engine.solution(), engine.current_cost(),
                                      engine.iterations()};
    } else if (status == SolverEngine::Status::Failed) {
        outcome.result = GuessFailure{engine.failure_reason(), engine.iterations()};
    } else {
        outcome.result = GuessFailure{FailureReason::IterationCap, engine.iterations()};
    }
    if (record_trace) outcome.trace = engine.take_trace();
    return outcome;
}

namespace {

// best single-center solution: the trivially valid guess upper bound
std::pair<Solution, double> one_center_bound(const MetricSpace& space, double r, double z) {
    Solution best;
    double best_cost = std::numeric_limits<double>::infinity();
    if (space.discrete()) {
        for (std::size_t f = 0; f < space.facility_count(); ++f) {
            Solution cand{{Center::facility(static_cast<FacilityIndex>(f))}};
            const double c = cost(space, cand, r, z);
            if (c < best_cost) {
                best_cost = c;
                best = std::move(cand);
            }
        }
    } else {
        for (std::size_t p = 0; p < space.client_count(); ++p) {
            const auto coords = space.client_coords(static_cast<ClientIndex>(p));
            Solution cand{{Center::at({coords.begin(), coords.end()})}};
            const double c = cost(space, cand, r, z);
            if (c < best_cost) {
                best_cost = c;
                best = std::move(cand);
            }
        }
    }
    return {std::move(best), best_cost};
}

// smallest positive client-to-facility clamped distance, raised to z: a valid
// cost lower bound whenever the optimum is positive
double min_positive_contribution(const MetricSpace& space, double r, double z) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> dists(space.client_count());
    for (std::size_t f = 0; f < space.facility_count(); ++f) {
        space.client_distances(PointRef::facility(static_cast<FacilityIndex>(f)), dists);
        for (double d : dists) {
            const double v = clamped_distance(d, r);
            if (v > 0.0 && v < best) best = v;
        }
    }
    if (!std::isfinite(best)) return 0.0;
    return std::pow(best, z);
}

} // namespace

GuessGrid guess_grid(const MetricSpace& space, std::uint32_t k, double r, double epsilon,
                     double z, double multiplier) {
    (void)k;
    GuessGrid grid;
    auto [one_center, upper] = one_center_bound(space, r, z);
    grid.one_center = std::move(one_center);
    grid.upper = upper;
    if (upper == 0.0) {
        grid.upper_is_zero = true;
        return grid;
    }

    const double n = static_cast<double>(space.client_count());
    const double floor_bound = upper / (n * std::pow(n, z));
    const double contribution = min_positive_contribution(space, r, z);
    double lower = std::max(contribution, floor_bound);
    if (!(lower > 0.0)) lower = upper;
    lower = std::min(lower, upper);
    grid.lower = lower;

    const double mult = multiplier > 1.0 ? multiplier : 1.0 + epsilon / 3.0;
    double g = lower;
    while (true) {
        grid.guesses.push_back(g);
        if (g >= upper) break;
        g *= mult;
    }
    return grid;
}

SolveResult solve(const MetricSpace& space, std::uint32_t k, double r,
                  const SolverConfig& config) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0,1)");
    if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (space.discrete() && space.facility_count() == 0)
        throw std::invalid_argument("discrete instance without facilities");

    const double eps = config.epsilon;
    const double z = config.z;
    const double inflated_r = r * (1.0 + eps / 3.0);
    const std::uint64_t cap =
        config.iteration_cap == 0 ? default_iteration_cap(k, eps) : config.iteration_cap;

    SolveResult result;
    result.radius_used = inflated_r;
    result.report.repetitions = config.repetitions;

    std::vector<double> guesses;
    if (config.forced_guess) {
        guesses.push_back(*config.forced_guess);
        result.report.guess_lower = result.report.guess_upper = *config.forced_guess;
    } else {
        auto grid = guess_grid(space, k, r, eps, z, config.guess_multiplier);
        if (grid.upper_is_zero) {
            result.best = std::move(grid.one_center);
            result.best_cost = 0.0;
            result.report.single_center_shortcut = true;
            return result;
        }
        guesses = std::move(grid.guesses);
        result.report.guess_lower = grid.lower;
        result.report.guess_upper = grid.upper;
    }

    struct Slot {
        bool success = false;
        double cost = 0.0;
        std::uint64_t iterations = 0;
        FailureReason reason = FailureReason::BallIntersectionFail;
        Solution solution;
        std::vector<IterationRecord> trace;
        std::uint64_t seed = 0;
    };

    bool have_best = false;
    std::size_t best_guess_idx = 0, best_rep_idx = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    Slot best_slot;

    for (std::size_t gi = 0; gi < guesses.size(); ++gi) {
        const double g = guesses[gi];
        GuessReport gr;
        gr.guess = g;

        auto pre = std::make_shared<GuessPrecompute>();
        try {
            pre->upper_bounds = compute_upper_bounds(space, g, r);
        } catch (const GuessTooLargeError&) {
            gr.rejected_guess_too_large = true;
            result.report.per_guess.push_back(std::move(gr));
            continue;
        }
        pre->marked = greedy_mark(space, pre->upper_bounds);
        gr.marked_count = pre->marked.size();
        if (pre->marked.size() > k) {
            gr.rejected_too_many_marks = true;
            result.report.per_guess.push_back(std::move(gr));
            continue;
        }

        std::vector<Slot> slots(config.repetitions);
        parallel_for(config.repetitions, [&](std::size_t rep) {
            const std::uint64_t seed = derive_seed(config.seed, gi, rep);
            auto outcome = run_single(space, k, r, eps, g, seed, cap, z, config.client_weights,
                                      config.record_traces, pre);
            Slot& slot = slots[rep];
            slot.seed = seed;
            if (auto* success = std::get_if<GuessSuccess>(&outcome.result)) {
                slot.success = true;
                slot.cost = success->cost_at_inflated_radius;
                slot.iterations = success->iterations;
                slot.solution = std::move(success->solution);
                slot.trace = std::move(outcome.trace);
            } else {
                const auto& failure = std::get<GuessFailure>(outcome.result);
                slot.reason = failure.reason;
                slot.iterations = failure.iterations;
            }
        });

        for (std::size_t rep = 0; rep < slots.size(); ++rep) {
            Slot& slot = slots[rep];
            gr.total_iterations += slot.iterations;
            if (slot.success) {
                ++gr.successes;
                if (!gr.best_cost || slot.cost < *gr.best_cost) gr.best_cost = slot.cost;
                // ties by seed, then (guess, repetition): order-independent
                // under any worker schedule
                const bool better =
                    !have_best || slot.cost < best_cost ||
                    (slot.cost == best_cost &&
                     std::tuple(slot.seed, gi, rep) <
                         std::tuple(best_slot.seed, best_guess_idx, best_rep_idx));
                if (better) {
                    have_best = true;
                    best_cost = slot.cost;
                    best_guess_idx = gi;
                    best_rep_idx = rep;
                    best_slot = std::move(slot);
                }
            } else {
                switch (slot.reason) {
                case FailureReason::BallIntersectionFail: ++gr.failures_ball_intersection; break;
                case FailureReason::IterationCap: ++gr.failures_iteration_cap; break;
                case FailureReason::EmptySampleSet: ++gr.failures_empty_sample; break;
                default: break;
                }
            }
        }
        result.report.per_guess.push_back(std::move(gr));
    }

    if (!have_best) throw NoSolutionFoundError(std::move(result.report));

    result.best = std::move(best_slot.solution);
    result.best_cost = best_cost;
    result.best_trace = std::move(best_slot.trace);
    result.best_guess = guesses[best_guess_idx];
    result.best_seed = best_slot.seed;
    return result;
}

// ---------------------------------------------------------------------------
// scattering diagnostics
// ---------------------------------------------------------------------------

ScatterReport scatter_diagnostics(std::span<const IterationRecord> trace, double epsilon,
                                  std::uint32_t k, double r) {
    ScatterReport report;
    if (k == 0) return report;

    const double near_low = r * (1.0 - kTol);
    const double near_high = (8.0 * r / epsilon) * (1.0 + kTol) + kTol;
    const double far_span = 1e5 * static_cast<double>(k) / (epsilon * epsilon);

    report.clusters.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) report.clusters[i].cluster = i;

    for (const auto& rec : trace) {
        if (!rec.sampled || rec.cluster >= k) continue;
        auto& cl = report.clusters[rec.cluster];
        ++cl.sequence_length;
        if (rec.nearby_branch) {
            cl.nearby_radii.push_back(rec.delta);
        } else {
            cl.faraway_radii.push_back(rec.delta);
        }
    }

    for (auto& cl : report.clusters) {
        // r_min: smallest radius in the cluster's sequence above 8r/eps
        double r_min = std::numeric_limits<double>::infinity();
        auto consider = [&](double delta) {
            if (delta > 8.0 * r / epsilon && delta < r_min) r_min = delta;
        };
        for (double d : cl.nearby_radii) consider(d);
        for (double d : cl.faraway_radii) consider(d);
        const bool has_far = std::isfinite(r_min);
        cl.far_interval_low = has_far ? r_min : 0.0;
        cl.far_interval_high = has_far ? far_span * r_min : 0.0;

        const auto in_near = [&](double d) { return d >= near_low && d <= near_high; };
        const auto in_far = [&](double d) {
            return has_far && d >= cl.far_interval_low * (1.0 - kTol) &&
                   d <= cl.far_interval_high * (1.0 + kTol);
        };

        for (double d : cl.nearby_radii) {
            if (!in_near(d)) ++cl.violations;
        }
        for (double d : cl.faraway_radii) {
            if (in_near(d)) {
                ++cl.faraway_in_near_interval;
            } else if (!in_far(d)) {
                ++cl.violations;
            }
        }
        report.total_violations += cl.violations;
    }
    return report;
}

} // namespace hybridkc
