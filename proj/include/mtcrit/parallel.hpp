#pragma once
// Index-parallel map kernels. Work is always mapped into a preallocated array
// and reduced serially afterwards, so results do not depend on the thread count.

#include <cstddef>
#include <exception>
#include <vector>

namespace mtc {

enum class Exec { Serial, Parallel };

void set_thread_count(int n);
int thread_count();

template <class F>
void for_each_index(Exec ex, std::size_t n, F&& f) {
  if (ex == Exec::Parallel) {
    // Exceptions cannot cross the parallel region; the first one is rethrown afterwards.
    const long nn = static_cast<long>(n);
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nn; ++i) {
      try {
        f(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(mtc_for_each_index)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

// Fixed-shape pairwise summation (blocks of 8, then binary tree).
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

template <class F>
std::vector<double> map_values(Exec ex, std::size_t n, F&& f) {
  std::vector<double> out(n);
  for_each_index(ex, n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace mtc
