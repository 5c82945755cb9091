#include "hybridkc/oracle.hpp"

#include "hybridkc/errors.hpp"
#include "hybridkc/kernels.hpp"
#include "hybridkc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

namespace hybridkc {

namespace {

constexpr std::uint64_t kEnumerationBudget = 10'000'000;

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i, watching the cap
        const std::uint64_t num = n - k + i;
        if (result > cap * i / num + 1) return cap + 1;
        result = result * num / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

struct Enumeration {
    const MetricSpace& space;
    std::uint32_t k;
    std::vector<std::vector<double>> facility_rows; // per facility: distances to clients

    Enumeration(const MetricSpace& s, std::uint32_t kk) : space(s), k(kk) {
        const std::size_t m = space.facility_count();
        facility_rows.resize(m);
        for (std::size_t f = 0; f < m; ++f) {
            facility_rows[f].resize(space.client_count());
            space.client_distances(PointRef::facility(static_cast<FacilityIndex>(f)),
                                   facility_rows[f]);
        }
    }
};

// Walks all size-kk subsets with a fixed first element, lexicographically.
template <typename Eval>
void for_each_subset_with_first(std::size_t m, std::uint32_t kk, std::size_t first,
                                Eval&& eval) {
    std::vector<std::size_t> idx(kk);
    idx[0] = first;
    for (std::uint32_t j = 1; j < kk; ++j) idx[j] = first + j;
    if (kk > 1 && idx[kk - 1] >= m) return;
    while (true) {
        eval(idx);
        if (kk == 1) return;
        // advance positions 1..kk-1 (position 0 is pinned)
        std::size_t pos = kk - 1;
        while (pos >= 1 && idx[pos] == m - (kk - pos)) --pos;
        if (pos == 0) return;
        ++idx[pos];
        for (std::size_t j = pos + 1; j < kk; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct BlockBest {
    double value = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> subset;
    std::uint64_t count = 0;
};

// objective(dmin array) -> value; minimized over subsets
template <typename Objective>
std::pair<BlockBest, std::uint64_t> enumerate_min(const Enumeration& enumeration,
                                                  Objective&& objective) {
    const std::size_t m = enumeration.space.facility_count();
    const std::uint32_t kk = enumeration.k;
    const std::size_t n = enumeration.space.client_count();

    const std::size_t first_count = m - kk + 1;
    std::vector<BlockBest> blocks(first_count);

    parallel_for(first_count, [&](std::size_t first) {
        BlockBest& best = blocks[first];
        std::vector<double> dmin(n);
        for_each_subset_with_first(m, kk, first, [&](const std::vector<std::size_t>& idx) {
            ++best.count;
            std::copy(enumeration.facility_rows[idx[0]].begin(),
                      enumeration.facility_rows[idx[0]].end(), dmin.begin());
            for (std::uint32_t j = 1; j < kk; ++j) {
                kernels::min_inplace(dmin.data(), enumeration.facility_rows[idx[j]].data(), n);
            }
            const double value = objective(dmin);
            if (value < best.value) {
                best.value = value;
                best.subset = idx;
            }
        });
    });

    // deterministic reduction: min value, ties by lexicographic subset (equal
    // to first-index order here since blocks are ordered by first element)
    BlockBest overall;
    std::uint64_t total = 0;
    for (auto& b : blocks) {
        total += b.count;
        if (b.subset.empty()) continue;
        if (b.value < overall.value) {
            overall.value = b.value;
            overall.subset = b.subset;
        }
    }
    return {std::move(overall), total};
}

std::uint32_t checked_subset_size(const MetricSpace& space, std::uint32_t k) {
    if (!space.discrete() || space.facility_count() == 0)
        throw TooLargeError("brute force needs a discrete facility set");
    const auto m = static_cast<std::uint64_t>(space.facility_count());
    const std::uint32_t kk = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(k, m));
    if (binomial_capped(m, kk, kEnumerationBudget) > kEnumerationBudget)
        throw TooLargeError("subset enumeration exceeds the 1e7 budget");
    return kk;
}

} // namespace

OracleResult brute_force(const MetricSpace& space, std::uint32_t k, double r, double z) {
    const std::uint32_t kk = checked_subset_size(space, k);
    Enumeration enumeration(space, kk);
    auto [best, total] = enumerate_min(enumeration, [&](const std::vector<double>& dmin) {
        return kernels::power_cost_sum(dmin.data(), dmin.size(), r, z);
    });

    OracleResult result;
    result.opt_cost = best.value;
    result.enumerated_count = total;
    for (std::size_t f : best.subset)
        result.opt_solution.centers.push_back(Center::facility(static_cast<FacilityIndex>(f)));
    return result;
}

double kcenter_radius(const MetricSpace& space, std::uint32_t k) {
    const std::uint32_t kk = checked_subset_size(space, k);
    Enumeration enumeration(space, kk);
    auto [best, total] = enumerate_min(enumeration, [&](const std::vector<double>& dmin) {
        return kernels::max_value(dmin.data(), dmin.size());
    });
    (void)total;
    return best.value;
}

BicriteriaCheck verify_bicriteria(const MetricSpace& space, const Solution& x, std::uint32_t k,
                                  double r, double epsilon, double opt_cost, double z) {
    BicriteriaCheck check;
    if (x.centers.empty() || x.centers.size() > k) {
        check.detail = "solution size out of range";
        return check;
    }
    check.cost_at_inflated_radius = cost(space, x, (1.0 + epsilon) * r, z);
    check.bound = (1.0 + epsilon) * opt_cost * (1.0 + 1e-9) + 1e-12;
    check.ok = check.cost_at_inflated_radius <= check.bound;
    if (!check.ok) check.detail = "cost above bicriteria bound";
    return check;
}

} // namespace hybridkc
