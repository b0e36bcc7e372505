#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ensred::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// True when called from inside an active parallel region. Kernels use this
// to avoid nesting (e.g. split search inside a parallel sweep).
inline bool in_parallel() {
#ifdef _OPENMP
    return omp_in_parallel() != 0;
#else
    return false;
#endif
}

}  // namespace ensred::par
