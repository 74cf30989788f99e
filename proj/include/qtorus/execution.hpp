#pragma once

namespace qtorus {

/// Kernels with a data-parallel inner loop come in two flavours: the serial
/// reference, kept for tests, and an OpenMP version.
enum class Execution { serial, parallel };

/// Number of OpenMP threads that a parallel region would use.
int max_threads();

} // namespace qtorus
