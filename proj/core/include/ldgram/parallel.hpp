#pragma once

#include <cstddef>
#include <functional>

namespace ldgram {

// 0 means: LDGRAM_THREADS if set, otherwise hardware concurrency.
int resolve_threads(int requested);

// Runs body(i) for i in [0, count). Each index is processed exactly once;
// callers write results to per-index slots so the outcome is schedule-free.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ldgram
