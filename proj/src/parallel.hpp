#pragma once

#include <cstddef>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eikonal::detail {

/// Runs fn(i) for i in [0, n). Each index writes only its own slot, so the
/// result does not depend on the thread count. The exception thrown at the
/// lowest index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::exception_ptr first;
    std::size_t first_idx = std::numeric_limits<std::size_t>::max();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(eikonal_parallel_for)
            {
                if (static_cast<std::size_t>(i) < first_idx) {
                    first_idx = static_cast<std::size_t>(i);
                    first = std::current_exception();
                }
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace eikonal::detail
