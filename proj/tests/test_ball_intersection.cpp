#include "hybridkc/ball_intersection.hpp"
#include "hybridkc/errors.hpp"
#include "hybridkc/generate.hpp"
#include "hybridkc/rng.hpp"

#include <doctest.h>

#include "support.hpp"

#include <cmath>

using namespace hybridkc;
using namespace testsupport;

TEST_CASE("discrete solve: hand-built line example") {
    // clients at 0 and 4; facilities at -2, 3, 5
    auto space = line_space({0.0, 4.0}, {-2.0, 3.0, 5.0});
    RequestSet q{{{0, 2.0}, {1, 4.0}}};

    // ratios: f0 max(1, 1.5)=1.5; f1 max(1.5, 0.25)=1.5; f2 max(2.5, 0.25)=2.5
    auto res = solve_discrete(space, q, 0.6);
    auto* ok = std::get_if<DiscreteBallResult>(&res);
    REQUIRE(ok != nullptr);
    CHECK(ok->facility == 0); // tie with f1 broken by index
    CHECK(ok->ratio == doctest::Approx(1.5));

    auto infeasible = solve_discrete(space, q, 0.4);
    auto* inf = std::get_if<Infeasible>(&infeasible);
    REQUIRE(inf != nullptr);
    CHECK(inf->best_ratio == doctest::Approx(1.5));
}

TEST_CASE("discrete solve: trivial cases") {
    auto space = line_space({1.0, 7.0}, {1.0, 9.0});
    // a facility coincides with the request point
    auto res = solve_discrete(space, RequestSet{{{0, 3.0}}}, 0.5);
    auto* ok = std::get_if<DiscreteBallResult>(&res);
    REQUIRE(ok != nullptr);
    CHECK(ok->facility == 0);
    CHECK(ok->ratio == 0.0);

    // radii too small for every facility
    auto res2 = solve_discrete(space, RequestSet{{{0, 1e-6}, {1, 1e-6}}}, 0.5);
    CHECK(std::holds_alternative<Infeasible>(res2));

    CHECK_THROWS_AS((void)solve_discrete(space, RequestSet{}, 0.5), EmptyRequestError);
    CHECK_THROWS_AS((void)solve_discrete(space, RequestSet{{{0, 0.0}}}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("discrete solve agrees with the reference scan on 200 random request sets") {
    Xoshiro256PlusPlus rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = (trial % 2)
                              ? gen_matrix_random_metric(8, 6, 2, 0.0, 5000 + trial)
                              : gen_euclidean_uniform(8, 6, 2, 2, 0.0, 5000 + trial);
        RequestSet q;
        const auto count = 1 + rng.next_below(5);
        for (std::uint64_t i = 0; i < count; ++i) {
            q.requests.push_back({static_cast<ClientIndex>(rng.next_below(8)),
                                  0.05 + rng.next_double() * 1.5});
        }
        const double eta = 0.05 + rng.next_double() * 0.5;

        const auto expect = reference_scan(inst.space, q, eta);
        const auto got = solve_discrete(inst.space, q, eta);
        if (expect.feasible) {
            auto* ok = std::get_if<DiscreteBallResult>(&got);
            REQUIRE(ok != nullptr);
            CHECK(ok->facility == expect.facility);
            CHECK(ok->ratio == expect.ratio);
        } else {
            CHECK(std::holds_alternative<Infeasible>(got));
        }
    }
}

TEST_CASE("incremental constraint state matches from-scratch solving") {
    Xoshiro256PlusPlus rng(77);
    const auto inst = gen_matrix_random_metric(10, 7, 2, 0.0, 321);
    DiscreteConstraintState state(inst.space);
    RequestSet q;
    for (int step = 0; step < 12; ++step) {
        const Request req{static_cast<ClientIndex>(rng.next_below(10)),
                          0.05 + rng.next_double()};
        q.requests.push_back(req);
        state.add(req);
        const double eta = 0.3;
        const auto a = state.best(eta);
        const auto b = solve_discrete(inst.space, q, eta);
        CHECK(a.index() == b.index());
        if (const auto* ra = std::get_if<DiscreteBallResult>(&a)) {
            const auto* rb = std::get_if<DiscreteBallResult>(&b);
            CHECK(ra->facility == rb->facility);
            CHECK(ra->ratio == rb->ratio);
        }
    }
}

TEST_CASE("adding requests never improves the min ratio; infeasibility persists") {
    Xoshiro256PlusPlus rng(88);
    for (int trial = 0; trial < 25; ++trial) {
        const auto inst = gen_matrix_random_metric(8, 5, 2, 0.0, 9000 + trial);
        RequestSet q;
        double prev = 0.0;
        bool was_infeasible = false;
        const double eta = 0.25;
        for (int step = 0; step < 8; ++step) {
            q.requests.push_back({static_cast<ClientIndex>(rng.next_below(8)),
                                  0.05 + rng.next_double() * 0.6});
            const auto res = solve_discrete(inst.space, q, eta);
            const double ratio = std::holds_alternative<Infeasible>(res)
                                     ? std::get<Infeasible>(res).best_ratio
                                     : std::get<DiscreteBallResult>(res).ratio;
            CHECK(ratio >= prev);
            prev = ratio;
            if (was_infeasible) CHECK(std::holds_alternative<Infeasible>(res));
            was_infeasible = std::holds_alternative<Infeasible>(res);
        }
    }
}

TEST_CASE("euclidean solve: singleton and symmetric pair") {
    auto space = MetricSpace::euclidean(2, {0.0, 0.0, 2.0, 0.0}, {});
    // single request: the point itself, ratio 0
    auto res = solve_euclidean(space, RequestSet{{{0, 1.0}}}, 0.2);
    auto* ok = std::get_if<EuclideanBallResult>(&res);
    REQUIRE(ok != nullptr);
    CHECK(ok->ratio == 0.0);
    CHECK(ok->point[0] == doctest::Approx(0.0));
    CHECK(ok->point[1] == doctest::Approx(0.0));

    // two unit requests 2 apart: optimum is the midpoint at ratio 1
    for (double eta : {0.5, 0.2, 0.05}) {
        auto res2 = solve_euclidean(space, RequestSet{{{0, 1.0}, {1, 1.0}}}, eta);
        auto* ok2 = std::get_if<EuclideanBallResult>(&res2);
        REQUIRE(ok2 != nullptr);
        CHECK(ok2->ratio <= 1.0 + eta + 1e-9);
    }
}

TEST_CASE("euclidean solve: unit triangle against the grid oracle") {
    const double h = std::sqrt(3.0) / 2.0;
    auto space = MetricSpace::euclidean(2, {0.0, 0.0, 1.0, 0.0, 0.5, h}, {});
    RequestSet q{{{0, 1.0}, {1, 1.0}, {2, 1.0}}};
    const double eta = 0.1;

    const auto grid = grid_min_ratio(space, q, -2.0, 2.0, 1e-3);
    CHECK(grid.min_ratio == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-2));

    auto res = solve_euclidean(space, q, eta);
    auto* ok = std::get_if<EuclideanBallResult>(&res);
    REQUIRE(ok != nullptr);
    CHECK(ok->ratio <= (1.0 + eta) * grid.min_ratio + 1e-9);
}

TEST_CASE("euclidean solve: certified infeasibility and the in-between band") {
    auto space = MetricSpace::euclidean(2, {0.0, 0.0, 10.0, 0.0}, {});
    // two distant points demanding tiny radii: clearly infeasible
    auto res = solve_euclidean(space, RequestSet{{{0, 0.01}, {1, 0.01}}}, 0.1);
    CHECK(std::holds_alternative<Infeasible>(res));
}

TEST_CASE("euclidean solve never reports Infeasible on exactly feasible inputs") {
    Xoshiro256PlusPlus rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        // plant a feasible center c: radii delta_i >= ||c - p_i||
        const std::size_t count = 2 + rng.next_below(4);
        std::vector<double> coords;
        const double cx = rng.next_double() * 2.0 - 1.0;
        const double cy = rng.next_double() * 2.0 - 1.0;
        std::vector<double> radii;
        for (std::size_t i = 0; i < count; ++i) {
            const double px = rng.next_double() * 2.0 - 1.0;
            const double py = rng.next_double() * 2.0 - 1.0;
            coords.push_back(px);
            coords.push_back(py);
            const double d = std::hypot(px - cx, py - cy);
            radii.push_back(std::max(d / (0.8 + 0.2 * rng.next_double()), 1e-3));
        }
        auto space = MetricSpace::euclidean(2, std::move(coords), {});
        RequestSet q;
        for (std::size_t i = 0; i < count; ++i)
            q.requests.push_back({static_cast<ClientIndex>(i), radii[i]});
        const double eta = 0.05 + rng.next_double() * 0.4;
        const auto res = solve_euclidean(space, q, eta);
        CHECK(!std::holds_alternative<Infeasible>(res));
        if (const auto* ok = std::get_if<EuclideanBallResult>(&res))
            CHECK(ok->ratio <= 1.0 + eta + 1e-9);
    }
}

TEST_CASE("scale invariance: powers of two scale exactly") {
    auto base = MetricSpace::euclidean(2, {0.0, 0.5, 1.0, 0.25, 0.75, 1.5}, {});
    RequestSet q{{{0, 0.5}, {1, 0.75}, {2, 0.4}}};
    const double c = 4.0;
    auto scaled_space =
        MetricSpace::euclidean(2, {0.0, 2.0, 4.0, 1.0, 3.0, 6.0}, {});
    RequestSet scaled_q{{{0, 2.0}, {1, 3.0}, {2, 1.6}}};

    const auto a = solve_euclidean(base, q, 0.15);
    const auto b = solve_euclidean(scaled_space, scaled_q, 0.15);
    REQUIRE(a.index() == b.index());
    if (const auto* ra = std::get_if<EuclideanBallResult>(&a)) {
        const auto* rb = std::get_if<EuclideanBallResult>(&b);
        CHECK(ra->ratio == rb->ratio);
        CHECK(rb->point[0] == c * ra->point[0]);
        CHECK(rb->point[1] == c * ra->point[1]);
    }

    // discrete scale invariance: same facility returned
    auto dspace = line_space({0.0, 4.0}, {-2.0, 3.0, 5.0});
    auto dspace_scaled = line_space({0.0, 8.0}, {-4.0, 6.0, 10.0});
    const auto da = solve_discrete(dspace, RequestSet{{{0, 2.0}, {1, 4.0}}}, 0.6);
    const auto db = solve_discrete(dspace_scaled, RequestSet{{{0, 4.0}, {1, 8.0}}}, 0.6);
    CHECK(std::get<DiscreteBallResult>(da).facility ==
          std::get<DiscreteBallResult>(db).facility);
}

TEST_CASE("determinism: identical inputs, identical outputs") {
    auto space = MetricSpace::euclidean(2, {0.0, 0.0, 1.3, 0.4, 0.2, 1.1}, {});
    RequestSet q{{{0, 0.7}, {1, 0.9}, {2, 0.6}}};
    const auto a = solve_euclidean(space, q, 0.12);
    const auto b = solve_euclidean(space, q, 0.12);
    REQUIRE(a.index() == b.index());
    if (const auto* ra = std::get_if<EuclideanBallResult>(&a)) {
        const auto* rb = std::get_if<EuclideanBallResult>(&b);
        CHECK(ra->point == rb->point);
        CHECK(ra->ratio == rb->ratio);
    }
}
