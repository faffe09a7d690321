#pragma once

#include <functional>

namespace tvnet {

/// Caps the number of worker threads used by parallel loops (>= 1).
/// Results never depend on this value; it only bounds concurrency.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [0, count). Tasks are distributed over at most
/// max_threads() workers; each index is processed by exactly one worker,
/// so any output written to per-index slots is schedule-independent.
/// Nested calls from inside a worker run sequentially.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace tvnet
