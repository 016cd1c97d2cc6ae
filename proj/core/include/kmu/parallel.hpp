#pragma once

#include <cstddef>
#include <functional>

namespace kmu {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work items
/// are claimed from a shared counter; callers write results into per-index
/// slots so the outcome is independent of scheduling. The first exception
/// thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Worker count used when a caller asks for "max" parallelism.
std::size_t hardware_workers() noexcept;

}  // namespace kmu
