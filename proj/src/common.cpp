#include "clsm/common.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clsm {

void set_max_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void apply_thread_env() {
  const char* v = std::getenv("CLSM_THREADS");
  if (v == nullptr || *v == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 0)
    throw ConfigError("CLSM_THREADS must be a non-negative integer");
  set_max_threads(static_cast<int>(n));
}

}  // namespace clsm
