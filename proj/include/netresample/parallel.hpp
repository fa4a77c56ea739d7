#pragma once

#include <cstddef>
#include <functional>

namespace netresample {

/// Worker count used by replicate-parallel loops. 0 means hardware concurrency.
/// Results never depend on this value.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is processed exactly once;
/// callers write results into slot i so the output order is fixed.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace netresample
