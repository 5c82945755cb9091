#pragma once

// Minimal worker pool. HYBRID_THREADS caps the worker count (default: machine
// parallelism). Callers write results into preallocated slots so reductions
// stay order-independent.

#include <cstddef>
#include <cstdint>
#include <functional>

namespace hybridkc {

std::uint32_t worker_count();

// Runs fn(0..jobs-1); job order is unspecified across workers.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn);

} // namespace hybridkc
