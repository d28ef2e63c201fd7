#ifndef GSO_PARALLEL_HPP
#define GSO_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace gso {

// Worker cap from GSO_THREADS; unset or 0 means hardware concurrency.
inline int worker_count()
{
  int requested = 0;
  if (const char* env = std::getenv("GSO_THREADS"))
    requested = std::atoi(env);
  if (requested <= 0)
    requested = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(requested, 1);
}

// Calls fn(begin, end) on contiguous chunks of [0, count). Chunks only touch
// disjoint state, so results do not depend on the worker count.
template <typename Fn>
void parallel_for(int count, Fn&& fn)
{
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    if (count > 0)
      fn(0, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end)
      break;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads)
    t.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

}  // namespace gso

#endif  // GSO_PARALLEL_HPP
