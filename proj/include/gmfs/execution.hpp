#pragma once

namespace gmfs {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// identical results; the serial path is kept for testing and benchmarks.
enum class Execution { serial, parallel };

}  // namespace gmfs
