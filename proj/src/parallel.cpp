#include "gre/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gre {

int thread_budget(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int env_count = 0;
  if (const char* env = std::getenv("GRE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) env_count = v;
  }
  // An explicit GRE_THREADS is authoritative for default-sized work and a
  // hard cap on requested counts.
  int budget = requested > 0 ? requested : (env_count > 0 ? env_count : hw);
  if (env_count > 0 && budget > env_count) budget = env_count;
  return budget;
}

namespace {
// Nested parallel_for calls run serially in the calling worker.
thread_local bool inside_worker = false;
}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int max_threads) {
  if (count == 0) return;
  int workers = thread_budget(max_threads);
  if (static_cast<std::size_t>(workers) > count)
    workers = static_cast<int>(count);

  if (workers <= 1 || inside_worker) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto body = [&]() {
    inside_worker = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gre
