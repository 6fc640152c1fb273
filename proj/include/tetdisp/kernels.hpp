#pragma once

#include <omp.h>

#include <exception>
#include <mutex>
#include <vector>

namespace tetdisp {

enum class ExecPolicy { serial, parallel };

/// Caps the OpenMP worker pool (values < 1 leave the default).
void set_num_threads(int n);
int max_threads();

/// out[i] = f(i) for i in [0, n). The parallel path writes into pre-sized
/// slots, so results are identical to the serial path regardless of the
/// thread count. The first exception thrown by any task is rethrown.
template <class R, class F>
std::vector<R> indexed_map(int n, F&& f, ExecPolicy policy = ExecPolicy::parallel) {
  std::vector<R> out(static_cast<size_t>(n));
  if (policy == ExecPolicy::serial || n < 2) {
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = f(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = f(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace tetdisp
