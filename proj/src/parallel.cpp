#include "squirrel/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace squirrel::parallel {

namespace {

int hardware_default() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::atomic<int> g_max_threads{0}; // 0 = unset, use hardware default

} // namespace

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
  int t = g_max_threads.load(std::memory_order_relaxed);
  return t > 0 ? t : hardware_default();
}

void set_max_threads(int n) {
  g_max_threads.store(n < 1 ? 0 : n, std::memory_order_relaxed);
}

namespace detail {

void run_indexed(std::size_t n, void (*trampoline)(void *, std::size_t),
                 void *ctx) {
#ifdef _OPENMP
  int threads = max_threads();
  if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      trampoline(ctx, static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) {
    trampoline(ctx, i);
  }
}

} // namespace detail

} // namespace squirrel::parallel
