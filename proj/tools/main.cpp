// hybridkc command-line tool: instance generation, solving, coresets, exact
// oracles, constraint checking, benchmarking and trace diagnostics. Every
// command emits a self-describing JSON run report on stdout (and optionally
// to a file); all randomness flows from --seed.

#include "hybridkc/ball_intersection.hpp"
#include "hybridkc/coreset.hpp"
#include "hybridkc/cost.hpp"
#include "hybridkc/errors.hpp"
#include "hybridkc/generate.hpp"
#include "hybridkc/instance.hpp"
#include "hybridkc/kernels.hpp"
#include "hybridkc/oracle.hpp"
#include "hybridkc/parallel.hpp"
#include "hybridkc/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hybridkc;

namespace {

constexpr int kSchemaVersion = 1;

class PhaseTimer {
public:
    void start(const std::string& phase) {
        finish();
        current_ = phase;
        begin_ = std::chrono::steady_clock::now();
    }
    void finish() {
        if (current_.empty()) return;
        const auto end = std::chrono::steady_clock::now();
        timings_[current_] =
            std::chrono::duration<double, std::milli>(end - begin_).count();
        current_.clear();
    }
    json to_json() {
        finish();
        json out = json::object();
        double total = 0.0;
        for (const auto& [phase, ms] : timings_) {
            out[phase] = ms;
            total += ms;
        }
        out["total"] = total;
        return out;
    }

private:
    std::map<std::string, double> timings_;
    std::string current_;
    std::chrono::steady_clock::time_point begin_;
};

json center_to_json(const Center& c) {
    if (c.is_facility()) return json{{"facility", c.facility_index()}};
    const auto coords = c.coords();
    return json{{"coords", std::vector<double>(coords.begin(), coords.end())}};
}

json solution_to_json(const Solution& s) {
    json arr = json::array();
    for (const auto& c : s.centers) arr.push_back(center_to_json(c));
    return arr;
}

json guess_report_to_json(const GuessReport& g) {
    json out{{"guess", g.guess},
             {"marked", g.marked_count},
             {"successes", g.successes},
             {"failures",
              {{"ball-intersection", g.failures_ball_intersection},
               {"iteration-cap", g.failures_iteration_cap},
               {"empty-sample", g.failures_empty_sample}}},
             {"iterations", g.total_iterations}};
    if (g.rejected_too_many_marks)
        out["rejected"] = "too-many-marks";
    else if (g.rejected_guess_too_large)
        out["rejected"] = "guess-too-large";
    else
        out["rejected"] = nullptr;
    out["best_cost"] = g.best_cost ? json(*g.best_cost) : json(nullptr);
    return out;
}

json per_guess_to_json(const SolveReport& r) {
    json per_guess = json::array();
    for (const auto& g : r.per_guess) per_guess.push_back(guess_report_to_json(g));
    return per_guess;
}

json trace_to_json(std::span<const IterationRecord> trace) {
    json arr = json::array();
    for (const auto& rec : trace) {
        json row{{"iteration", rec.iteration},
                 {"branch", rec.nearby_branch ? "nearby" : "faraway"},
                 {"accepted", rec.accepted}};
        if (rec.sampled) {
            row["client"] = rec.client;
            row["cluster"] = rec.cluster;
            row["delta"] = rec.delta;
            row["distance"] = rec.distance;
        } else {
            row["client"] = nullptr;
        }
        arr.push_back(std::move(row));
    }
    return arr;
}

std::vector<IterationRecord> trace_from_json(const json& arr) {
    std::vector<IterationRecord> trace;
    for (const auto& row : arr) {
        IterationRecord rec;
        rec.iteration = row.value("iteration", std::uint64_t{0});
        rec.nearby_branch = row.value("branch", std::string("faraway")) == "nearby";
        rec.accepted = row.value("accepted", false);
        if (row.contains("client") && !row["client"].is_null()) {
            rec.sampled = true;
            rec.client = row["client"].get<ClientIndex>();
            rec.cluster = row["cluster"].get<std::uint32_t>();
            rec.delta = row["delta"].get<double>();
            rec.distance = row.value("distance", 0.0);
        }
        trace.push_back(rec);
    }
    return trace;
}

json scatter_report_to_json(const ScatterReport& r) {
    json clusters = json::array();
    for (const auto& c : r.clusters) {
        clusters.push_back(json{{"cluster", c.cluster},
                                {"nearby_radii", c.nearby_radii},
                                {"faraway_radii", c.faraway_radii},
                                {"far_interval", {c.far_interval_low, c.far_interval_high}},
                                {"sequence_length", c.sequence_length},
                                {"violations", c.violations},
                                {"faraway_in_near_interval", c.faraway_in_near_interval}});
    }
    return json{{"clusters", std::move(clusters)}, {"total_violations", r.total_violations}};
}

int emit_report(const json& report, const std::optional<std::string>& out_path) {
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (out_path) atomic_write_file(*out_path, text);
    return 0;
}

json make_report(const std::vector<std::string>& argv, json config, json outcome,
                 PhaseTimer& timer) {
    return json{{"schema_version", kSchemaVersion},
                {"command", argv},
                {"config", std::move(config)},
                {"timings_ms", timer.to_json()},
                {"outcome", std::move(outcome)}};
}

std::vector<std::string> expand_patterns(const std::vector<std::string>& patterns) {
    std::vector<std::string> files;
    for (const auto& pattern : patterns) {
        if (pattern.find_first_of("*?[") == std::string::npos) {
            files.push_back(pattern);
            continue;
        }
        const fs::path p(pattern);
        const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
        const std::string leaf = p.filename().string();
        std::vector<std::string> matched;
        if (fs::exists(dir)) {
            for (const auto& entry : fs::directory_iterator(dir)) {
                const std::string name = entry.path().filename().string();
                if (::fnmatch(leaf.c_str(), name.c_str(), 0) == 0)
                    matched.push_back(entry.path().string());
            }
        }
        std::sort(matched.begin(), matched.end());
        files.insert(files.end(), matched.begin(), matched.end());
    }
    return files;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// ---------------------------------------------------------------------------

int cmd_gen(const std::vector<std::string>& argv, const std::string& kind, std::size_t n,
            std::size_t m, std::size_t dim, std::uint32_t k, double r, std::uint64_t seed,
            const std::string& out, const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("generate");
    const Instance inst = generate_instance(kind, n, m, dim, k, r, seed);
    timer.start("write");
    const std::string text = instance_to_json(inst);
    atomic_write_file(out, text);
    timer.finish();

    json config{{"kind", kind}, {"n", n},       {"m", m},       {"dim", dim},
                {"k", k},       {"r", r},       {"seed", seed}, {"out", out}};
    json outcome{{"path", out},
                 {"bytes", text.size()},
                 {"clients", inst.space.client_count()},
                 {"facilities", inst.space.facility_count()}};
    return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                       report_out);
}

int cmd_solve(const std::vector<std::string>& argv, const std::string& instance_path,
              SolverConfig cfg, std::optional<double> z_override,
              const std::optional<std::string>& trace_out,
              const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("load");
    const Instance inst = load_instance(instance_path);
    const double z = z_override.value_or(inst.z);
    cfg.z = z;
    cfg.record_traces = cfg.record_traces || trace_out.has_value();

    json config{{"instance", instance_path},
                {"epsilon", cfg.epsilon},
                {"repetitions", cfg.repetitions},
                {"iteration_cap",
                 cfg.iteration_cap == 0 ? default_iteration_cap(inst.k, cfg.epsilon)
                                        : cfg.iteration_cap},
                {"seed", cfg.seed},
                {"z", z},
                {"k", inst.k},
                {"r", inst.r},
                {"kernel_backend", kernels::backend_name(kernels::active_backend())},
                {"threads", worker_count()}};
    if (cfg.forced_guess) config["guess"] = *cfg.forced_guess;

    timer.start("solve");
    try {
        const SolveResult result = solve(inst.space, inst.k, inst.r, cfg);
        timer.start("report");
        if (trace_out) {
            json trace{{"schema_version", kSchemaVersion},
                       {"epsilon", cfg.epsilon},
                       {"k", inst.k},
                       {"r", inst.r},
                       {"z", z},
                       {"guess", result.best_guess},
                       {"seed", result.best_seed},
                       {"records", trace_to_json(result.best_trace)}};
            atomic_write_file(*trace_out, trace.dump(2) + "\n");
        }
        json outcome{{"best_cost", result.best_cost},
                     {"radius_used", result.radius_used},
                     {"centers", solution_to_json(result.best)},
                     {"best_guess", result.best_guess},
                     {"per_guess", per_guess_to_json(result.report)},
                     {"guess_lower", result.report.guess_lower},
                     {"guess_upper", result.report.guess_upper},
                     {"single_center_shortcut", result.report.single_center_shortcut}};
        return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                           report_out);
    } catch (const NoSolutionFoundError& e) {
        timer.start("report");
        json outcome{{"error", "no-solution-found"},
                     {"per_guess", per_guess_to_json(e.report)}};
        emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                    report_out);
        return 2;
    }
}

int cmd_oracle(const std::vector<std::string>& argv, const std::string& instance_path,
               std::optional<double> z_override, bool kcenter,
               const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("load");
    const Instance inst = load_instance(instance_path);
    const double z = z_override.value_or(inst.z);

    json config{{"instance", instance_path}, {"z", z}, {"kcenter", kcenter},
                {"k", inst.k},               {"r", inst.r}};
    json outcome;
    timer.start("enumerate");
    if (kcenter) {
        outcome["radius"] = kcenter_radius(inst.space, inst.k);
    } else {
        const OracleResult result = brute_force(inst.space, inst.k, inst.r, z);
        json centers = json::array();
        for (const auto& c : result.opt_solution.centers) centers.push_back(c.facility_index());
        outcome["opt_cost"] = result.opt_cost;
        outcome["centers"] = std::move(centers);
        outcome["enumerated"] = result.enumerated_count;
    }
    // euclidean instances are certified against their finite facility list,
    // which only upper-bounds the continuous optimum over R^dim
    outcome["search_space"] = inst.space.backend() == MetricBackend::Euclidean
                                  ? "grid-restricted"
                                  : "facility-list";
    return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                       report_out);
}

int cmd_coreset(const std::vector<std::string>& argv, const std::string& instance_path,
                double epsilon, bool certify, std::uint64_t seed,
                const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("load");
    const Instance inst = load_instance(instance_path);

    json config{{"instance", instance_path}, {"epsilon", epsilon}, {"certify", certify},
                {"seed", seed},              {"k", inst.k},        {"r", inst.r}};

    timer.start("anchors");
    BuildTOptions options;
    options.seed = seed;
    const AnchorSet anchors = build_T(inst.space, inst.k, inst.r, options);

    timer.start("coreset");
    CoresetDiagnostics diag;
    const WeightedClientSet coreset =
        build_coreset(inst.space, inst.k, inst.r, epsilon, anchors, &diag);

    json members = json::array();
    for (const auto& m : coreset.members)
        members.push_back(json::array({m.client, m.weight}));

    json outcome{{"coreset", std::move(members)},
                 {"size", coreset.members.size()},
                 {"total_weight", coreset.total_weight()},
                 {"measured_alpha",
                  anchors.measured_ratio ? json(*anchors.measured_ratio) : json(nullptr)},
                 {"alpha_bound", anchors.alpha_bound},
                 {"t_size", anchors.points.size()},
                 {"t_cost", anchors.t_cost},
                 {"zero_cost_path", diag.zero_cost_path},
                 {"uncovered_fallback", diag.uncovered_fallback}};

    if (certify) {
        timer.start("certify");
        if (!inst.space.discrete() || inst.space.facility_count() == 0)
            throw ValidationError("--certify needs a discrete facility set");
        const std::size_t m = inst.space.facility_count();
        if (m > 24) throw TooLargeError("--certify enumerates subsets; facility set too large");
        double worst = 0.0;
        bool zero_ok = true;
        std::uint64_t checked = 0;
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            if (static_cast<std::uint32_t>(__builtin_popcount(mask)) > inst.k) continue;
            Solution x;
            for (std::uint32_t f = 0; f < m; ++f) {
                if (mask & (1u << f)) x.centers.push_back(Center::facility(f));
            }
            ++checked;
            const double true_cost = cost(inst.space, x, inst.r, 1.0);
            const double weighted = cost(inst.space, coreset, x, inst.r, 1.0);
            if (true_cost == 0.0) {
                if (weighted != 0.0) zero_ok = false;
                continue;
            }
            worst = std::max(worst, std::abs(weighted - true_cost) / true_cost);
        }
        outcome["max_relative_error"] = worst;
        outcome["zero_cost_requires_zero"] = zero_ok;
        outcome["solutions_checked"] = checked;
    }
    return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                       report_out);
}

int cmd_ballcheck(const std::vector<std::string>& argv, const std::string& instance_path,
                  const std::string& requests_path, std::optional<double> eta_flag,
                  const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("load");
    const Instance inst = load_instance(instance_path);

    std::ifstream in(requests_path);
    if (!in) throw IoError("cannot open request file: " + requests_path);
    json doc;
    in >> doc;

    RequestSet rs;
    double eta = eta_flag.value_or(0.1);
    if (doc.is_object()) {
        if (doc.contains("eta") && !eta_flag) eta = doc["eta"].get<double>();
        for (const auto& row : doc.at("requests")) {
            if (row.is_array())
                rs.requests.push_back({row.at(0).get<ClientIndex>(), row.at(1).get<double>()});
            else
                rs.requests.push_back(
                    {row.at("point").get<ClientIndex>(), row.at("radius").get<double>()});
        }
    } else {
        for (const auto& row : doc)
            rs.requests.push_back({row.at(0).get<ClientIndex>(), row.at(1).get<double>()});
    }

    json config{{"instance", instance_path}, {"requests", requests_path}, {"eta", eta}};
    json outcome;
    timer.start("solve");
    if (inst.space.discrete()) {
        const auto result = solve_discrete(inst.space, rs, eta);
        if (const auto* ok = std::get_if<DiscreteBallResult>(&result)) {
            outcome = {{"feasible", true}, {"facility", ok->facility}, {"ratio", ok->ratio}};
        } else {
            outcome = {{"feasible", false},
                       {"best_ratio", std::get<Infeasible>(result).best_ratio}};
        }
    } else {
        const auto result = solve_euclidean(inst.space, rs, eta);
        if (const auto* ok = std::get_if<EuclideanBallResult>(&result)) {
            outcome = {{"feasible", true}, {"point", ok->point}, {"ratio", ok->ratio}};
        } else if (const auto* inf = std::get_if<Infeasible>(&result)) {
            outcome = {{"feasible", false}, {"best_ratio", inf->best_ratio}};
        } else {
            outcome = {{"feasible", nullptr},
                       {"error", "budget-exceeded"},
                       {"best_ratio", std::get<BudgetExceeded>(result).best_ratio}};
        }
    }
    return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                       report_out);
}

int cmd_bench(const std::vector<std::string>& argv, const std::vector<std::string>& patterns,
              double epsilon, std::uint32_t repetitions, std::uint64_t seed,
              std::uint64_t iteration_cap, const std::string& csv_out,
              const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("bench");
    const auto files = expand_patterns(patterns);

    std::ostringstream csv;
    csv << "instance,guess_index,guess,repetition,seed,outcome,iterations,"
           "nearby_count,faraway_count,cost,cost_ratio_vs_oracle\n";

    std::uint64_t rows = 0;
    for (const auto& file : files) {
        const Instance inst = load_instance(file);
        const std::uint64_t cap = iteration_cap == 0
                                      ? default_iteration_cap(inst.k, epsilon)
                                      : iteration_cap;

        std::optional<double> opt_cost;
        try {
            opt_cost = brute_force(inst.space, inst.k, inst.r, inst.z).opt_cost;
        } catch (const TooLargeError&) {
        }

        const auto grid = guess_grid(inst.space, inst.k, inst.r, epsilon, inst.z);
        for (std::size_t gi = 0; gi < grid.guesses.size(); ++gi) {
            auto pre = std::make_shared<GuessPrecompute>();
            bool usable = true;
            try {
                pre->upper_bounds = compute_upper_bounds(inst.space, grid.guesses[gi], inst.r);
                pre->marked = greedy_mark(inst.space, pre->upper_bounds);
            } catch (const GuessTooLargeError&) {
                usable = false;
            }
            for (std::uint32_t rep = 0; rep < repetitions; ++rep) {
                const std::uint64_t rep_seed = derive_seed(seed, gi, rep);
                std::string outcome_name;
                std::uint64_t iterations = 0;
                std::uint64_t nearby = 0, faraway = 0;
                std::string cost_str, ratio_str;
                if (!usable) {
                    outcome_name = "guess-too-large";
                } else {
                    const auto outcome =
                        run_single(inst.space, inst.k, inst.r, epsilon, grid.guesses[gi],
                                   rep_seed, cap, inst.z, {}, /*record_trace=*/true, pre);
                    for (const auto& rec : outcome.trace) {
                        if (!rec.sampled) continue;
                        (rec.nearby_branch ? nearby : faraway) += 1;
                    }
                    if (const auto* success = std::get_if<GuessSuccess>(&outcome.result)) {
                        outcome_name = "success";
                        iterations = success->iterations;
                        cost_str = std::to_string(success->cost_at_inflated_radius);
                        if (opt_cost && *opt_cost > 0.0)
                            ratio_str =
                                std::to_string(success->cost_at_inflated_radius / *opt_cost);
                    } else {
                        const auto& failure = std::get<GuessFailure>(outcome.result);
                        outcome_name = failure_reason_name(failure.reason);
                        iterations = failure.iterations;
                    }
                }
                csv << csv_escape(file) << ',' << gi << ',' << grid.guesses[gi] << ',' << rep
                    << ',' << rep_seed << ',' << outcome_name << ',' << iterations << ','
                    << nearby << ',' << faraway << ',' << cost_str << ',' << ratio_str << '\n';
                ++rows;
            }
        }
    }

    atomic_write_file(csv_out, csv.str());
    timer.finish();

    json config{{"patterns", patterns},          {"epsilon", epsilon},
                {"repetitions", repetitions},    {"seed", seed},
                {"iteration_cap", iteration_cap}, {"out", csv_out}};
    json outcome{{"instances", files.size()}, {"rows", rows}, {"csv", csv_out}};
    return emit_report(make_report(argv, std::move(config), std::move(outcome), timer),
                       report_out);
}

int cmd_diag(const std::vector<std::string>& argv, const std::string& trace_path,
             const std::optional<std::string>& report_out) {
    PhaseTimer timer;
    timer.start("load");
    std::ifstream in(trace_path);
    if (!in) throw IoError("cannot open trace file: " + trace_path);
    json doc;
    in >> doc;

    const double epsilon = doc.at("epsilon").get<double>();
    const auto k = doc.at("k").get<std::uint32_t>();
    const double r = doc.at("r").get<double>();
    const auto trace = trace_from_json(doc.at("records"));

    timer.start("diagnose");
    const auto report = scatter_diagnostics(trace, epsilon, k, r);

    json config{{"trace", trace_path}, {"epsilon", epsilon}, {"k", k}, {"r", r}};
    return emit_report(
        make_report(argv, std::move(config), scatter_report_to_json(report), timer), report_out);
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> argv_echo(argv + 1, argv + argc);

    CLI::App app{"hybrid radius/median clustering toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    std::string gen_kind = "euclidean-uniform";
    std::size_t gen_n = 10, gen_m = 5, gen_dim = 2;
    std::uint32_t gen_k = 2;
    double gen_r = 0.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--kind", gen_kind,
                    "euclidean-uniform | euclidean-planted | matrix-random-metric");
    gen->add_option("--n", gen_n, "client count");
    gen->add_option("--m", gen_m, "facility count");
    gen->add_option("--dim", gen_dim, "dimension (euclidean kinds)");
    gen->add_option("--k", gen_k, "cluster count");
    gen->add_option("--r", gen_r, "radius");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output instance path")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run the bicriteria solver");
    std::string solve_instance;
    SolverConfig solve_cfg;
    solve_cfg.repetitions = 50;
    double solve_guess = 0.0;
    double solve_z = 0.0;
    std::string solve_trace, solve_out;
    solve_cmd->add_option("--instance", solve_instance)->required();
    solve_cmd->add_option("--epsilon", solve_cfg.epsilon);
    solve_cmd->add_option("--repetitions", solve_cfg.repetitions);
    solve_cmd->add_option("--iteration-cap", solve_cfg.iteration_cap);
    solve_cmd->add_option("--seed", solve_cfg.seed);
    solve_cmd->add_option("--z", solve_z, "override the instance's power");
    solve_cmd->add_option("--guess", solve_guess, "run a single guess G");
    solve_cmd->add_option("--trace", solve_trace, "write the best run's trace JSON");
    solve_cmd->add_option("--out", solve_out, "also write the report to a file");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force reference");
    std::string oracle_instance;
    double oracle_z = 0.0;
    bool oracle_kcenter = false;
    std::string oracle_out;
    oracle_cmd->add_option("--instance", oracle_instance)->required();
    oracle_cmd->add_option("--z", oracle_z);
    oracle_cmd->add_flag("--kcenter", oracle_kcenter, "report the exact k-center radius");
    oracle_cmd->add_option("--out", oracle_out);

    // coreset
    auto* coreset_cmd = app.add_subcommand("coreset", "build a weighted coreset");
    std::string coreset_instance;
    double coreset_epsilon = 0.3;
    bool coreset_certify = false;
    std::uint64_t coreset_seed = 0x5eedc0de;
    std::string coreset_out;
    coreset_cmd->add_option("--instance", coreset_instance)->required();
    coreset_cmd->add_option("--epsilon", coreset_epsilon);
    coreset_cmd->add_flag("--certify", coreset_certify,
                          "exhaustively verify the relative-error bound");
    coreset_cmd->add_option("--seed", coreset_seed, "anchor-construction seed");
    coreset_cmd->add_option("--out", coreset_out);

    // ballcheck
    auto* ball_cmd = app.add_subcommand("ballcheck", "solve one request set");
    std::string ball_instance, ball_requests, ball_out;
    double ball_eta = 0.0;
    ball_cmd->add_option("--instance", ball_instance)->required();
    ball_cmd->add_option("--requests", ball_requests, "request-set JSON")->required();
    ball_cmd->add_option("--eta", ball_eta, "override the file's eta");
    ball_cmd->add_option("--out", ball_out);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "per-repetition CSV sweep");
    std::vector<std::string> bench_patterns;
    double bench_epsilon = 0.5;
    std::uint32_t bench_reps = 2;
    std::uint64_t bench_seed = 1, bench_cap = 0;
    std::string bench_out;
    bench_cmd->add_option("instances", bench_patterns, "instance files or globs");
    bench_cmd->add_option("--epsilon", bench_epsilon);
    bench_cmd->add_option("--repetitions", bench_reps);
    bench_cmd->add_option("--seed", bench_seed);
    bench_cmd->add_option("--iteration-cap", bench_cap);
    bench_cmd->add_option("--out", bench_out, "CSV path")->required();

    // diag
    auto* diag_cmd = app.add_subcommand("diag", "scattering diagnostics from a trace");
    std::string diag_trace, diag_out;
    diag_cmd->add_option("--trace", diag_trace)->required();
    diag_cmd->add_option("--out", diag_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto opt_str = [](const std::string& s) {
        return s.empty() ? std::nullopt : std::optional<std::string>(s);
    };

    try {
        if (gen->parsed())
            return cmd_gen(argv_echo, gen_kind, gen_n, gen_m, gen_dim, gen_k, gen_r, gen_seed,
                           gen_out, std::nullopt);
        if (solve_cmd->parsed()) {
            if (solve_guess > 0.0) solve_cfg.forced_guess = solve_guess;
            return cmd_solve(argv_echo, solve_instance, solve_cfg,
                             solve_z > 0.0 ? std::optional<double>(solve_z) : std::nullopt,
                             opt_str(solve_trace), opt_str(solve_out));
        }
        if (oracle_cmd->parsed())
            return cmd_oracle(argv_echo, oracle_instance,
                              oracle_z > 0.0 ? std::optional<double>(oracle_z) : std::nullopt,
                              oracle_kcenter, opt_str(oracle_out));
        if (coreset_cmd->parsed())
            return cmd_coreset(argv_echo, coreset_instance, coreset_epsilon, coreset_certify,
                               coreset_seed, opt_str(coreset_out));
        if (ball_cmd->parsed())
            return cmd_ballcheck(argv_echo, ball_instance, ball_requests,
                                 ball_eta > 0.0 ? std::optional<double>(ball_eta) : std::nullopt,
                                 opt_str(ball_out));
        if (bench_cmd->parsed())
            return cmd_bench(argv_echo, bench_patterns, bench_epsilon, bench_reps, bench_seed,
                             bench_cap, bench_out, std::nullopt);
        if (diag_cmd->parsed()) return cmd_diag(argv_echo, diag_trace, opt_str(diag_out));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
