// Scalar reference kernels. The AVX2 variants in kernels_avx2.cpp must follow
// the exact per-element operation order used here.

#include "hybridkc/kernels.hpp"

#include <cmath>

namespace hybridkc::kernels {
namespace {

void clamp_shift_scalar(const double* dist, std::size_t n, double alpha, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v = dist[i] - alpha;
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void min_inplace_scalar(double* acc, const double* vals, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (vals[i] < acc[i]) acc[i] = vals[i];
    }
}

void max_ratio_inplace_scalar(double* acc, const double* vals, double divisor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double v = vals[i] / divisor;
        if (v > acc[i]) acc[i] = v;
    }
}

std::size_t count_leq_scalar(const double* vals, std::size_t n, double threshold) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vals[i] <= threshold) ++count;
    }
    return count;
}

double max_value_scalar(const double* vals, std::size_t n) {
    if (n == 0) return 0.0;
    double m = vals[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (vals[i] > m) m = vals[i];
    }
    return m;
}

void euclidean_distances_scalar(const double* points, std::size_t n, std::size_t dim,
                                const double* query, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = points + i * dim;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double diff = row[j] - query[j];
            acc = acc + diff * diff;
        }
        out[i] = std::sqrt(acc);
    }
}

} // namespace

namespace detail {

const KernelTable scalar_table = {
    clamp_shift_scalar,
    min_inplace_scalar,
    max_ratio_inplace_scalar,
    count_leq_scalar,
    max_value_scalar,
    euclidean_distances_scalar,
};

} // namespace detail

double sum(const double* vals, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += vals[i];
    return acc;
}

double power_cost_sum(const double* dist, std::size_t n, double alpha, double z) {
    double acc = 0.0;
    if (z == 1.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dist[i] - alpha;
            if (v > 0.0) acc += v;
        }
    } else if (z == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dist[i] - alpha;
            if (v > 0.0) acc += v * v;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = dist[i] - alpha;
            if (v > 0.0) acc += std::pow(v, z);
        }
    }
    return acc;
}

double weighted_power_cost_sum(const double* dist, const double* weight, std::size_t n,
                               double alpha, double z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = dist[i] - alpha;
        if (v <= 0.0) continue;
        if (z == 1.0) {
            acc += weight[i] * v;
        } else if (z == 2.0) {
            acc += weight[i] * (v * v);
        } else {
            acc += weight[i] * std::pow(v, z);
        }
    }
    return acc;
}

} // namespace hybridkc::kernels
