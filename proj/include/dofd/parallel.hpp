#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace dofd {

enum class Exec { Serial, Parallel };

/// Runs body(i) for i in [0, n). Exceptions thrown by any iteration are
/// captured and the first one is rethrown on the calling thread.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace dofd
