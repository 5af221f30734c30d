#pragma once

namespace latnet {

// Execution mode for the enumeration kernels. `parallel` partitions the
// index range across OpenMP workers (falling back to serial when built
// without OpenMP); `serial` is the reference implementation the parallel
// path is tested against. Both produce identical, lexicographically ordered
// results.
enum class Exec { serial, parallel };

}  // namespace latnet
