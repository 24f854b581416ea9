#pragma once

#include <functional>

namespace knotflow {

// 0 selects std::thread::hardware_concurrency().
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for every i in [0, count) using a static partition. Callers
// write into per-index slots and reduce sequentially afterwards, which keeps
// results bit-identical for any thread count.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace knotflow
