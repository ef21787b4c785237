#pragma once

#include <cstddef>
#include <functional>

namespace hdsz {

// Worker count: hardware concurrency, capped by HDSZ_THREADS when set.
std::size_t ThreadBudget();

// Runs body(i) for i in [0, count) on up to ThreadBudget() threads. The first
// exception thrown by any call is rethrown after all workers stop.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hdsz
