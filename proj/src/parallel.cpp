#include "dispersia/parallel.hpp"

#include "dispersia/core.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace dispersia {

int thread_count() {
  const char* env = std::getenv("DISPERSIA_THREADS");
  if (env == nullptr || *env == '\0') return omp_get_max_threads();
  int n = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, n);
  if (ec != std::errc() || ptr != end || n <= 0)
    throw DomainError(std::string("DISPERSIA_THREADS must be a positive integer, got '") + env + "'");
  return n;
}

}  // namespace dispersia
