#pragma once

#include <exception>
#include <functional>

namespace debiaskf {

// Worker cap: DEBIASKF_THREADS when set (>=1), else hardware concurrency.
int thread_cap();

// Runs fn(0..n-1) across up to thread_cap() workers. Rethrows the
// lowest-index exception after all workers join. Safe to nest (falls back
// to serial when n or the cap is 1).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace debiaskf
