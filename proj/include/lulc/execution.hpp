#pragma once

namespace lulc {

// Selects between the OpenMP kernels and their serial reference versions.
// Both produce bitwise-identical results; the serial path exists for tests
// and benchmarks.
enum class Execution { serial, parallel };

// Number of threads the parallel kernels will use (1 without OpenMP).
int worker_threads();

} // namespace lulc
