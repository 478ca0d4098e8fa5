#pragma once

#include <cstddef>

namespace squirrel::parallel {

/// True when the library was compiled with OpenMP support.
bool openmp_enabled();

/// Current worker cap. 1 selects the serial reference path.
int max_threads();

/// Set the worker cap; n < 1 resets to the hardware default.
void set_max_threads(int n);

namespace detail {
void run_indexed(std::size_t n, void (*trampoline)(void *, std::size_t),
                 void *ctx);
}

/// Run fn(0) .. fn(n-1), possibly in parallel. Every index must be
/// independent and write only to its own slot; callers reduce the slots in
/// fixed index order afterwards, so results are identical for any thread
/// count, including the serial path.
template <typename Fn> void for_each_index(std::size_t n, Fn &&fn) {
  auto trampoline = [](void *ctx, std::size_t i) {
    (*static_cast<Fn *>(ctx))(i);
  };
  detail::run_indexed(n, trampoline, &fn);
}

} // namespace squirrel::parallel
