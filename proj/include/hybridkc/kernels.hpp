#pragma once

// Data-parallel inner loops used throughout the library, with a scalar
// reference implementation and an AVX2 variant selected at runtime.
//
// Contract: every elementwise kernel produces bit-identical output on every
// backend (same per-element operation order, no FMA contraction). Reductions
// that sum values (sum, power_cost_sum, ...) accumulate strictly in index
// order in every backend, so solver decisions and reported costs never depend
// on which backend happens to be active.

#include <cstddef>
#include <cstdint>

namespace hybridkc::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Active backend: resolved once from the CPU and the HYBRID_KERNELS
// environment variable ("scalar" | "avx2" | "auto"). set_backend() is meant
// for tests and CLI startup; do not call it while kernels run on other
// threads.
Backend active_backend();
void set_backend(Backend b);

// out[i] = max(dist[i] - alpha, 0)
void clamp_shift(const double* dist, std::size_t n, double alpha, double* out);

// acc[i] = min(acc[i], vals[i])
void min_inplace(double* acc, const double* vals, std::size_t n);

// acc[i] = max(acc[i], vals[i] / divisor)
void max_ratio_inplace(double* acc, const double* vals, double divisor, std::size_t n);

// number of entries with vals[i] <= threshold
std::size_t count_leq(const double* vals, std::size_t n, double threshold);

// maximum entry; 0 for n == 0
double max_value(const double* vals, std::size_t n);

// out[i] = Euclidean distance from row i of points (n x dim, row-major) to query
void euclidean_distances(const double* points, std::size_t n, std::size_t dim,
                         const double* query, double* out);

// Index-order reductions (single accumulator on every backend).
double sum(const double* vals, std::size_t n);

// sum_i max(dist[i] - alpha, 0)^z; z == 1 and z == 2 avoid pow()
double power_cost_sum(const double* dist, std::size_t n, double alpha, double z);

// sum_i w[i] * max(dist[i] - alpha, 0)^z
double weighted_power_cost_sum(const double* dist, const double* weight, std::size_t n,
                               double alpha, double z);

namespace detail {

struct KernelTable {
    void (*clamp_shift)(const double*, std::size_t, double, double*);
    void (*min_inplace)(double*, const double*, std::size_t);
    void (*max_ratio_inplace)(double*, const double*, double, std::size_t);
    std::size_t (*count_leq)(const double*, std::size_t, double);
    double (*max_value)(const double*, std::size_t);
    void (*euclidean_distances)(const double*, std::size_t, std::size_t, const double*, double*);
};

extern const KernelTable scalar_table;
extern const KernelTable avx2_table;

} // namespace detail

} // namespace hybridkc::kernels
