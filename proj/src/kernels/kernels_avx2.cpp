// AVX2 kernel variants. Compiled with -mavx2 in its own translation unit; the
// dispatcher only installs this table when the CPU reports AVX2.
//
// Per-element arithmetic mirrors the scalar reference exactly: vector lanes
// carry independent elements, accumulation within an element walks the same
// order, and no FMA is used, so results are bit-identical to the scalar path.

#include "hybridkc/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define HYBRIDKC_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define HYBRIDKC_HAVE_AVX2_TU 0
#endif

#include <cmath>

namespace hybridkc::kernels {

#if HYBRIDKC_HAVE_AVX2_TU

namespace {

void clamp_shift_avx2(const double* dist, std::size_t n, double alpha, double* out) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(dist + i);
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_sub_pd(d, va), zero));
    }
    for (; i < n; ++i) {
        const double v = dist[i] - alpha;
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void min_inplace_avx2(double* acc, const double* vals, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(acc + i);
        const __m256d v = _mm256_loadu_pd(vals + i);
        _mm256_storeu_pd(acc + i, _mm256_min_pd(a, v));
    }
    for (; i < n; ++i) {
        if (vals[i] < acc[i]) acc[i] = vals[i];
    }
}

void max_ratio_inplace_avx2(double* acc, const double* vals, double divisor, std::size_t n) {
    const __m256d vd = _mm256_set1_pd(divisor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(acc + i);
        const __m256d v = _mm256_div_pd(_mm256_loadu_pd(vals + i), vd);
        _mm256_storeu_pd(acc + i, _mm256_max_pd(a, v));
    }
    for (; i < n; ++i) {
        const double v = vals[i] / divisor;
        if (v > acc[i]) acc[i] = v;
    }
}

std::size_t count_leq_avx2(const double* vals, std::size_t n, double threshold) {
    const __m256d vt = _mm256_set1_pd(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(vals + i);
        const __m256d cmp = _mm256_cmp_pd(v, vt, _CMP_LE_OQ);
        count += static_cast<std::size_t>(__builtin_popcount(
            static_cast<unsigned>(_mm256_movemask_pd(cmp))));
    }
    for (; i < n; ++i) {
        if (vals[i] <= threshold) ++count;
    }
    return count;
}

double max_value_avx2(const double* vals, std::size_t n) {
    if (n == 0) return 0.0;
    double m = vals[0];
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_loadu_pd(vals);
        for (i = 4; i + 4 <= n; i += 4) {
            vm = _mm256_max_pd(vm, _mm256_loadu_pd(vals + i));
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vm);
        m = lanes[0];
        for (int j = 1; j < 4; ++j) {
            if (lanes[j] > m) m = lanes[j];
        }
    }
    for (; i < n; ++i) {
        if (vals[i] > m) m = vals[i];
    }
    return m;
}

// Four points per iteration; the per-dimension accumulation order inside each
// lane matches the scalar loop.
void euclidean_distances_avx2(const double* points, std::size_t n, std::size_t dim,
                              const double* query, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* r0 = points + (i + 0) * dim;
        const double* r1 = points + (i + 1) * dim;
        const double* r2 = points + (i + 2) * dim;
        const double* r3 = points + (i + 3) * dim;
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const __m256d x = _mm256_set_pd(r3[j], r2[j], r1[j], r0[j]);
            const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(query[j]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
        }
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
    }
    for (; i < n; ++i) {
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

const KernelTable avx2_table = {
    clamp_shift_avx2,
    min_inplace_avx2,
    max_ratio_inplace_avx2,
    count_leq_avx2,
    max_value_avx2,
    euclidean_distances_avx2,
};

} // namespace detail

#else // !HYBRIDKC_HAVE_AVX2_TU

namespace detail {

// Non-x86 build: the dispatcher never selects this table.
const KernelTable avx2_table = scalar_table;

} // namespace detail

#endif

} // namespace hybridkc::kernels
