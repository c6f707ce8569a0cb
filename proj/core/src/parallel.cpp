#include "qtf/parallel.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qtf {

namespace {
thread_local int g_threads = 1;  // per calling thread, so concurrent runs can differ
}

void set_thread_count(int n) {
  g_threads = std::max(1, n);
#ifdef _OPENMP
  omp_set_num_threads(g_threads);
#endif
}

int thread_count() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (g_threads > 1) {
#pragma omp parallel for schedule(static) num_threads(g_threads)
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace qtf
