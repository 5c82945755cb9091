#include "hybridkc/kernels.hpp"
#include "hybridkc/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hybridkc;
namespace k = hybridkc::kernels;

namespace {

std::vector<double> random_values(std::uint64_t seed, std::size_t n, double lo, double hi) {
    Xoshiro256PlusPlus rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.next_double();
    return v;
}

struct BackendGuard {
    k::Backend saved;
    BackendGuard() : saved(k::active_backend()) {}
    ~BackendGuard() { k::set_backend(saved); }
};

} // namespace

TEST_CASE("kernel backends produce bit-identical elementwise results") {
    if (!k::backend_available(k::Backend::Avx2)) {
        MESSAGE("AVX2 unavailable; scalar-only run");
        return;
    }
    BackendGuard guard;

    // sizes straddle the vector width to cover remainders
    for (std::size_t n : {0, 1, 3, 4, 5, 8, 17, 64, 1001}) {
        const auto dist = random_values(10 + n, n, 0.0, 5.0);
        const auto other = random_values(20 + n, n, 0.0, 5.0);

        std::vector<double> a(n), b(n);
        k::set_backend(k::Backend::Scalar);
        k::clamp_shift(dist.data(), n, 1.25, a.data());
        k::set_backend(k::Backend::Avx2);
        k::clamp_shift(dist.data(), n, 1.25, b.data());
        CHECK(a == b);

        std::vector<double> acc_s(dist), acc_v(dist);
        k::set_backend(k::Backend::Scalar);
        k::min_inplace(acc_s.data(), other.data(), n);
        k::set_backend(k::Backend::Avx2);
        k::min_inplace(acc_v.data(), other.data(), n);
        CHECK(acc_s == acc_v);

        std::vector<double> max_s(dist), max_v(dist);
        k::set_backend(k::Backend::Scalar);
        k::max_ratio_inplace(max_s.data(), other.data(), 0.7, n);
        k::set_backend(k::Backend::Avx2);
        k::max_ratio_inplace(max_v.data(), other.data(), 0.7, n);
        CHECK(max_s == max_v);

        k::set_backend(k::Backend::Scalar);
        const auto count_s = k::count_leq(dist.data(), n, 2.5);
        const auto peak_s = k::max_value(dist.data(), n);
        k::set_backend(k::Backend::Avx2);
        CHECK(count_s == k::count_leq(dist.data(), n, 2.5));
        CHECK(peak_s == k::max_value(dist.data(), n));
    }
}

TEST_CASE("euclidean distance kernel matches across backends and dims") {
    if (!k::backend_available(k::Backend::Avx2)) return;
    BackendGuard guard;

    for (std::size_t dim : {1, 2, 3, 7, 16}) {
        for (std::size_t n : {1, 4, 5, 33}) {
            const auto points = random_values(dim * 100 + n, n * dim, -2.0, 2.0);
            const auto query = random_values(999 + dim, dim, -2.0, 2.0);
            std::vector<double> a(n), b(n);
            k::set_backend(k::Backend::Scalar);
            k::euclidean_distances(points.data(), n, dim, query.data(), a.data());
            k::set_backend(k::Backend::Avx2);
            k::euclidean_distances(points.data(), n, dim, query.data(), b.data());
            CHECK(a == b);
        }
    }
}

TEST_CASE("elementwise kernels compute the right values") {
    const std::vector<double> dist{0.0, 1.0, 2.5, 3.0, 4.75};
    std::vector<double> out(dist.size());
    k::clamp_shift(dist.data(), dist.size(), 2.5, out.data());
    CHECK(out == std::vector<double>{0.0, 0.0, 0.0, 0.5, 2.25});

    CHECK(k::count_leq(dist.data(), dist.size(), 2.5) == 3);
    CHECK(k::max_value(dist.data(), dist.size()) == 4.75);
    CHECK(k::max_value(dist.data(), 0) == 0.0);

    std::vector<double> acc{5.0, 0.5, 3.0, 3.0, 1.0};
    k::min_inplace(acc.data(), dist.data(), dist.size());
    CHECK(acc == std::vector<double>{0.0, 0.5, 2.5, 3.0, 1.0});
}

TEST_CASE("power cost sums accumulate in index order") {
    const auto dist = random_values(42, 257, 0.0, 3.0);
    double expect1 = 0.0, expect2 = 0.0;
    for (double d : dist) {
        const double v = d - 0.8 > 0.0 ? d - 0.8 : 0.0;
        expect1 += v;
        expect2 += v * v;
    }
    CHECK(k::power_cost_sum(dist.data(), dist.size(), 0.8, 1.0) == expect1);
    CHECK(k::power_cost_sum(dist.data(), dist.size(), 0.8, 2.0) == expect2);

    // general z via pow
    const double z = 1.7;
    double expectz = 0.0;
    for (double d : dist) {
        const double v = d - 0.8;
        if (v > 0.0) expectz += std::pow(v, z);
    }
    CHECK(k::power_cost_sum(dist.data(), dist.size(), 0.8, z) == expectz);

    const auto w = random_values(43, dist.size(), 0.5, 2.0);
    double expectw = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double v = dist[i] - 0.8;
        if (v > 0.0) expectw += w[i] * v;
    }
    CHECK(k::weighted_power_cost_sum(dist.data(), w.data(), dist.size(), 0.8, 1.0) == expectw);
}

TEST_CASE("backend selection is sticky and reversible") {
    BackendGuard guard;
    k::set_backend(k::Backend::Scalar);
    CHECK(k::active_backend() == k::Backend::Scalar);
    if (k::backend_available(k::Backend::Avx2)) {
        k::set_backend(k::Backend::Avx2);
        CHECK(k::active_backend() == k::Backend::Avx2);
    }
}
