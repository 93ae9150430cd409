#pragma once

// Include this instead of <omp.h> so the kernels still build without OpenMP.

#if defined(_OPENMP)
#include <omp.h>
namespace semcom {
inline constexpr bool kUseOpenMp = true;
}  // namespace semcom
#else
namespace semcom {
inline constexpr bool kUseOpenMp = false;
}  // namespace semcom
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
#endif
