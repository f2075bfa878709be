#include "eigenchaos/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eigenchaos {
namespace {

std::atomic<int> g_budget_override{0};

int env_threads() {
  if (const char* s = std::getenv("EIGENCHAOS_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 0;
}

constexpr long long kChunk = 64;

}  // namespace

int thread_budget() {
  if (const int v = g_budget_override.load(std::memory_order_relaxed); v > 0) return v;
  if (const int v = env_threads(); v > 0) return v;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_budget(int n) { g_budget_override.store(n > 0 ? n : 0, std::memory_order_relaxed); }

void parallel_trials(long long count, const std::function<void(long long)>& body) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<long long>(thread_budget(), count));
  if (workers <= 1) {
    for (long long t = 0; t < count; ++t) body(t);
    return;
  }

  std::atomic<long long> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const long long begin = cursor.fetch_add(kChunk, std::memory_order_relaxed);
      if (begin >= count) return;
      const long long end = std::min(begin + kChunk, count);
      try {
        for (long long t = begin; t < end; ++t) body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace eigenchaos
