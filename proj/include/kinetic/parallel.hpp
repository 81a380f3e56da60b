#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kinetic {

// Global worker count used by all node loops. Defaults to the hardware
// concurrency; the CLI overrides it from --threads / KINETIC_SELFSIM_THREADS.
int thread_count();
void set_thread_count(int n);

// Splits [0, n) into fixed-size blocks and runs `body(begin, end)` over them
// on the worker pool. Block boundaries do not depend on the thread count, so
// any reduction done per block and combined in block order is bit-reproducible
// regardless of --threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Deterministic parallel reduction: sums `block_sum(begin, end)` over fixed
// blocks, accumulating the per-block results in index order.
double parallel_reduce(std::size_t n, const std::function<double(std::size_t, std::size_t)>& block_sum);

} // namespace kinetic
