#pragma once

#include <cstddef>
#include <functional>

namespace nsplab {

/// Worker count: NSPLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs fn(i) for i in [0, count) on up to thread_count() threads. Tasks are
/// handed out dynamically, so fn must only write to slot i of its outputs.
/// The first exception thrown by a task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nsplab
