#pragma once

#include <cstddef>

namespace hyperreg {

// Worker count: the last value passed to set_thread_count, else
// HYPERREG_THREADS, else the hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Calls body(begin, end) on disjoint ranges covering [0, n). Each index is
// handled by exactly one call, so results written per index are independent
// of the thread count.
void parallel_for(std::size_t n, std::size_t min_chunk, void (*body)(void*, std::size_t, std::size_t), void* ctx);

template <class F>
void parallel_for(std::size_t n, std::size_t min_chunk, F&& f) {
  parallel_for(
      n, min_chunk,
      [](void* ctx, std::size_t b, std::size_t e) { (*static_cast<F*>(ctx))(b, e); },
      static_cast<void*>(&f));
}

}  // namespace hyperreg
