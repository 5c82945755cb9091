#include "hybridkc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace hybridkc::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend resolve_initial() {
    if (const char* env = std::getenv("HYBRID_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2())
                throw std::runtime_error("HYBRID_KERNELS=avx2 but the CPU lacks AVX2");
            return Backend::Avx2;
        }
        // anything else (including "auto") falls through to detection
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

struct Dispatch {
    Backend backend;
    const detail::KernelTable* table;
    Dispatch() : backend(resolve_initial()) {
        table = backend == Backend::Avx2 ? &detail::avx2_table : &detail::scalar_table;
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

} // namespace

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) {
    return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() { return dispatch().backend; }

void set_backend(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error(std::string("kernel backend unavailable: ") + backend_name(b));
    dispatch().backend = b;
    dispatch().table = b == Backend::Avx2 ? &detail::avx2_table : &detail::scalar_table;
}

void clamp_shift(const double* dist, std::size_t n, double alpha, double* out) {
    dispatch().table->clamp_shift(dist, n, alpha, out);
}

void min_inplace(double* acc, const double* vals, std::size_t n) {
    dispatch().table->min_inplace(acc, vals, n);
}

void max_ratio_inplace(double* acc, const double* vals, double divisor, std::size_t n) {
    dispatch().table->max_ratio_inplace(acc, vals, divisor, n);
}

std::size_t count_leq(const double* vals, std::size_t n, double threshold) {
    return dispatch().table->count_leq(vals, n, threshold);
}

double max_value(const double* vals, std::size_t n) {
    return dispatch().table->max_value(vals, n);
}

void euclidean_distances(const double* points, std::size_t n, std::size_t dim,
                         const double* query, double* out) {
    dispatch().table->euclidean_distances(points, n, dim, query, out);
}

} // namespace hybridkc::kernels
