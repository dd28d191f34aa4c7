#pragma once

namespace dispersia {

/// Number of OpenMP threads the grid kernels may use. Reads DISPERSIA_THREADS
/// (a positive integer) and falls back to the OpenMP default when it is unset.
/// Throws DomainError for a malformed value.
int thread_count();

}  // namespace dispersia
