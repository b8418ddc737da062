#pragma once

namespace qwork {

/// Kernel execution policy. Serial paths are the reference implementations
/// the OpenMP paths are tested against.
enum class Exec { Serial, Parallel };

}  // namespace qwork
