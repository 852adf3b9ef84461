#pragma once

#include <cstddef>
#include <functional>

namespace tvspec {

/// Number of workers used by parallel library operations. Initialised from
/// the TVSPEC_THREADS environment variable on first use, falling back to the
/// hardware concurrency.
std::size_t worker_count();

/// Overrides the worker count for the rest of the process (0 restores the
/// environment/hardware default).
void set_worker_count(std::size_t n);

/// Runs body(begin, end) over a static partition of [0, n). Chunks are
/// contiguous and each index is visited by exactly one worker, so callers that
/// write only to per-index outputs obtain thread-count independent results.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tvspec
