#include "leglab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace leglab {

namespace {

std::atomic<int> g_limit{0};

int env_limit() {
  const char* s = std::getenv("LEGLAB_THREADS");
  if (s == nullptr) return 0;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  return (end != s && v > 0) ? static_cast<int>(std::min(v, 1024L)) : 0;
}

}  // namespace

int thread_limit() {
  if (int n = g_limit.load(); n > 0) return n;
  if (int n = env_limit(); n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_limit(int n) { g_limit.store(std::max(0, n)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(thread_limit()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex m;
  std::size_t failed_at = count;
  std::exception_ptr error;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (i < failed_at) {
          failed_at = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace leglab
