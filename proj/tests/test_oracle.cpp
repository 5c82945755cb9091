#include "hybridkc/oracle.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/generate.hpp"

#include <doctest.h>

#include "support.hpp"

using namespace hybridkc;
using namespace testsupport;

TEST_CASE("brute force: degenerate shapes") {
    SUBCASE("k >= |F| enumerates the single full subset") {
        auto space = line_space({0.0, 2.0}, {0.0, 3.0});
        const auto result = brute_force(space, 5, 0.0, 1.0);
        CHECK(result.enumerated_count == 1);
        CHECK(result.opt_solution.centers.size() == 2);
        CHECK(result.opt_cost == doctest::Approx(0.0 + 1.0));
    }
    SUBCASE("r at the diameter: zero cost, lexicographically first subset") {
        auto space = line_space({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0});
        const auto result = brute_force(space, 1, 2.0, 1.0);
        CHECK(result.opt_cost == 0.0);
        CHECK(result.opt_solution.centers.size() == 1);
        CHECK(result.opt_solution.centers[0].facility_index() == 0);
    }
    SUBCASE("enumeration budget enforced") {
        auto inst = gen_euclidean_uniform(4, 40, 2, 10, 0.0, 3);
        CHECK_THROWS_AS((void)brute_force(inst.space, 10, 0.0, 1.0), TooLargeError);
    }
    SUBCASE("continuous spaces are rejected") {
        auto space = MetricSpace::euclidean(2, {0.0, 0.0}, {});
        CHECK_THROWS_AS((void)brute_force(space, 1, 0.0, 1.0), TooLargeError);
    }
}

TEST_CASE("brute force agrees with an independent permuted-order enumeration") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto inst = (seed % 2) ? gen_matrix_random_metric(8, 5, 2, 1.0, 100 + seed)
                               : gen_euclidean_uniform(8, 5, 2, 2, 0.2, 100 + seed);
        for (double z : {1.0, 2.0}) {
            const auto result = brute_force(inst.space, 2, inst.r, z);
            CHECK(result.opt_cost == cost(inst.space, result.opt_solution, inst.r, z));
            for (std::uint64_t perm = 0; perm < 3; ++perm) {
                CHECK(result.opt_cost ==
                      independent_brute_force(inst.space, 2, inst.r, z, 555 + perm));
            }
        }
    }
}

TEST_CASE("brute force cost is non-increasing in k and in r") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto inst = gen_matrix_random_metric(9, 6, 1, 0.0, 200 + seed);
        double prev = std::numeric_limits<double>::infinity();
        for (std::uint32_t k = 1; k <= 4; ++k) {
            const double c = brute_force(inst.space, k, 0.3, 1.0).opt_cost;
            CHECK(c <= prev + 1e-12);
            prev = c;
        }
        prev = std::numeric_limits<double>::infinity();
        for (double r : {0.0, 0.2, 0.5, 1.0}) {
            const double c = brute_force(inst.space, 2, r, 1.0).opt_cost;
            CHECK(c <= prev + 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("k-median equivalence: brute force at r = 0 matches the independent oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto inst = gen_euclidean_uniform(7, 5, 2, 2, 0.0, 300 + seed);
        CHECK(brute_force(inst.space, 2, 0.0, 1.0).opt_cost ==
              independent_brute_force(inst.space, 2, 0.0, 1.0, seed));
    }
}

TEST_CASE("k-center radius") {
    SUBCASE("co-located facilities cover at radius zero") {
        auto space = line_space({1.0, 4.0}, {1.0, 4.0});
        CHECK(kcenter_radius(space, 2) == 0.0);
    }
    SUBCASE("single facility: the farthest client decides") {
        auto space = line_space({0.0, 3.0, 10.0}, {2.0});
        CHECK(kcenter_radius(space, 1) == 8.0);
    }
    SUBCASE("exact enumeration on an 8-client instance") {
        auto inst = gen_matrix_random_metric(8, 5, 2, 0.0, 77);
        const double rstar = kcenter_radius(inst.space, 2);
        // cross-check: min over pairs of max distance, plain loops
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < 5; ++a) {
            for (std::size_t b = a; b < 5; ++b) {
                double worst = 0.0;
                for (std::size_t p = 0; p < 8; ++p) {
                    const double d = std::min(
                        inst.space.distance(PointRef::client(static_cast<ClientIndex>(p)),
                                            PointRef::facility(static_cast<FacilityIndex>(a))),
                        inst.space.distance(PointRef::client(static_cast<ClientIndex>(p)),
                                            PointRef::facility(static_cast<FacilityIndex>(b))));
                    worst = std::max(worst, d);
                }
                best = std::min(best, worst);
            }
        }
        CHECK(rstar == best);
    }
}

TEST_CASE("hybrid cost vanishes exactly at the k-center radius") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto inst = gen_matrix_random_metric(8, 5, 2, 0.0, 400 + seed);
        for (std::uint32_t k = 1; k <= 3; ++k) {
            const double rstar = kcenter_radius(inst.space, k);
            CHECK(brute_force(inst.space, k, rstar, 1.0).opt_cost == 0.0);
        }
    }
}

TEST_CASE("bicriteria verification") {
    auto inst = gen_matrix_random_metric(8, 5, 2, 0.5, 99);
    const auto opt = brute_force(inst.space, 2, 0.5, 1.0);
    SUBCASE("the optimum itself passes") {
        const auto check = verify_bicriteria(inst.space, opt.opt_solution, 2, 0.5, 0.5,
                                             opt.opt_cost, 1.0);
        CHECK(check.ok);
    }
    SUBCASE("an oversized or expensive solution fails") {
        Solution too_big;
        for (FacilityIndex f = 0; f < 3; ++f) too_big.centers.push_back(Center::facility(f));
        CHECK(!verify_bicriteria(inst.space, too_big, 2, 0.5, 0.5, opt.opt_cost, 1.0).ok);

        // pick the worst single facility; with eps tiny it cannot be within
        // (1+eps) of the 2-center optimum on this seeded instance
        Solution worst{{Center::facility(0)}};
        double worst_cost = 0.0;
        for (FacilityIndex f = 0; f < 5; ++f) {
            Solution cand{{Center::facility(f)}};
            const double c = cost(inst.space, cand, 0.5, 1.0);
            if (c > worst_cost) {
                worst_cost = c;
                worst = cand;
            }
        }
        REQUIRE(opt.opt_cost > 0.0);
        if (worst_cost > 1.001 * opt.opt_cost) {
            CHECK(!verify_bicriteria(inst.space, worst, 2, 0.0, 1e-3, opt.opt_cost, 1.0).ok);
        }
    }
}

TEST_CASE("z-power objectives flow through the oracle") {
    auto space = line_space({1.0, 5.0, 6.0}, {0.0, 7.0});
    // z = 2, r = 2: f0 gives 0 + 9 + 16 = 25, f1 gives 16 + 0 + 0 = 16
    const auto result = brute_force(space, 1, 2.0, 2.0);
    CHECK(result.opt_cost == doctest::Approx(16.0));
    CHECK(result.opt_solution.centers[0].facility_index() == 1);
}
