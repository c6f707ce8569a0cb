#pragma once

#include <functional>

namespace qtf {

/// Worker threads used by pointwise and stencil loops started from the
/// calling thread. Loops only write
/// disjoint outputs and all reductions are serial, so results do not depend
/// on this setting.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n), possibly concurrently.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace qtf
