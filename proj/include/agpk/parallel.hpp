#pragma once

#include <cstddef>
#include <functional>

namespace agpk {

/// Worker cap: AGPK_THREADS if set to a positive integer, else the number
/// of hardware threads (at least 1).
std::size_t worker_count();

/// Runs body(0..n-1) on up to `workers` threads. Results must be written to
/// index-addressed storage so the outcome does not depend on scheduling.
/// If any call throws, the exception from the lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t workers = worker_count());

}  // namespace agpk
