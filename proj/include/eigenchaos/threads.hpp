#pragma once
#include <functional>

namespace eigenchaos {

// Worker cap for trial-level parallelism. Resolution order: value set by
// set_thread_budget (CLI --threads), else the EIGENCHAOS_THREADS environment
// variable, else hardware concurrency. Always at least 1.
int thread_budget();
void set_thread_budget(int n);  // n <= 0 resets to automatic

// Runs body(trial) for trial = 0..count-1 across up to thread_budget()
// workers. Work is handed out in fixed-size chunks through an atomic cursor;
// the body must write its results into caller-owned slots indexed by `trial`
// so that the aggregate is independent of scheduling. The first exception
// thrown by any worker is rethrown after all workers join.
void parallel_trials(long long count, const std::function<void(long long)>& body);

}  // namespace eigenchaos
