#pragma once

#include <functional>

namespace geocontract {

/// Worker count: hardware concurrency, capped by GEOCONTRACT_THREADS.
int worker_count();

/// Runs fn(0..n-1) on worker_count() threads. Each index runs exactly once;
/// the first exception is rethrown after all workers stop.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace geocontract
