#pragma once

// Point-parallel evaluation. Every identity check in this library reduces to
// "evaluate something independent at each sample point, then reduce", so the
// only parallel construct needed is a map over points. Results land in a
// vector indexed by point, and all reductions happen afterwards in index
// order; reports therefore do not depend on the policy or thread count.

#include <cstddef>
#include <exception>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace binoether {

enum class ExecutionPolicy {
  Serial,  // reference implementation
  OpenMP,
};

inline const char* to_string(ExecutionPolicy p) { return p == ExecutionPolicy::Serial ? "serial" : "openmp"; }

/// fn(item) for every item. If any call throws, the exception from the
/// lowest-indexed failing item is rethrown after all items ran.
template <class Item, class Fn>
auto map_points(std::span<const Item> items, Fn&& fn, ExecutionPolicy policy)
    -> std::vector<std::invoke_result_t<Fn&, const Item&>> {
  using Result = std::invoke_result_t<Fn&, const Item&>;
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(items.size());
  std::vector<Result> results(items.size());
  std::vector<std::exception_ptr> errors(items.size());

  if (policy == ExecutionPolicy::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = fn(items[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = fn(items[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

template <class Item, class Fn>
auto map_points(const std::vector<Item>& items, Fn&& fn, ExecutionPolicy policy) {
  return map_points(std::span<const Item>(items), std::forward<Fn>(fn), policy);
}

/// Number of threads an OpenMP region would use (1 without OpenMP).
int parallel_thread_count();

}  // namespace binoether
