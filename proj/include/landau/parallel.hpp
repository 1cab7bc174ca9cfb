// SPDX-License-Identifier: Apache-2.0
//! \file parallel.hpp
//! Thin OpenMP wrappers that compile away without OpenMP.
#pragma once

#ifdef _OPENMP
#    include <omp.h>
#endif

namespace landau {

inline int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n)
{
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int thread_id()
{
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

//! Execution policy for kernels that keep a serial reference path
enum class Exec
{
    serial,
    parallel,
};

}  // namespace landau
