#pragma once

#include "qsim/types.hpp"

namespace qsim {

// Execution policy for the state-vector kernels and grid sweeps. Parallel
// uses OpenMP; Serial is the reference path the tests compare against.
// Both orders are deterministic: every loop writes disjoint indices and
// reductions are done serially over index order.
enum class Exec { Serial, Parallel };

Exec& default_exec();

// In-place single-qubit gate on a 2^L amplitude array, qubit q = bit q of
// the basis index (little-endian).
void apply_1q(cxd* amps, int L, int q, const Mat2& g, Exec ex);

// In-place two-qubit gate; q0 is the low bit of the 4-dim local index.
void apply_2q(cxd* amps, int L, int q0, int q1, const Mat4& g, Exec ex);

// Phase rotation exp(i c Z_j Z_k) applied as a diagonal, used by the
// ansatz fast path.
void apply_zz_phase(cxd* amps, int L, int j, int k, double c, Exec ex);

inline void apply_1q(cxd* amps, int L, int q, const Mat2& g) {
  apply_1q(amps, L, q, g, default_exec());
}
inline void apply_2q(cxd* amps, int L, int q0, int q1, const Mat4& g) {
  apply_2q(amps, L, q0, q1, g, default_exec());
}
inline void apply_zz_phase(cxd* amps, int L, int j, int k, double c) {
  apply_zz_phase(amps, L, j, k, c, default_exec());
}

} // namespace qsim
