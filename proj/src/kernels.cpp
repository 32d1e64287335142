#include "qsim/kernels.hpp"

namespace qsim {

Exec& default_exec() {
  static Exec mode = Exec::Parallel;
  return mode;
}

void apply_1q(cxd* amps, int L, int q, const Mat2& g, Exec ex) {
  const long n = 1L << L;
  const long bit = 1L << q;
  const long low_mask = bit - 1;
  const cxd g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  const long half = n / 2;
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < half; ++k) {
      const long i0 = ((k & ~low_mask) << 1) | (k & low_mask);
      const long i1 = i0 | bit;
      const cxd a0 = amps[i0], a1 = amps[i1];
      amps[i0] = g00 * a0 + g01 * a1;
      amps[i1] = g10 * a0 + g11 * a1;
    }
  } else {
    for (long k = 0; k < half; ++k) {
      const long i0 = ((k & ~low_mask) << 1) | (k & low_mask);
      const long i1 = i0 | bit;
      const cxd a0 = amps[i0], a1 = amps[i1];
      amps[i0] = g00 * a0 + g01 * a1;
      amps[i1] = g10 * a0 + g11 * a1;
    }
  }
}

void apply_2q(cxd* amps, int L, int q0, int q1, const Mat4& g, Exec ex) {
  const long n = 1L << L;
  const long b0 = 1L << q0;
  const long b1 = 1L << q1;
  const int lo = q0 < q1 ? q0 : q1;
  const int hi = q0 < q1 ? q1 : q0;
  const long lo_mask = (1L << lo) - 1;
  const long mid_mask = ((1L << (hi - 1)) - 1) & ~lo_mask;
  const long quarter = n / 4;
  auto body = [&](long k) {
    // Spread k over the L-2 non-target bits.
    long base = (k & lo_mask) | ((k & mid_mask) << 1);
    base = (base & ((1L << hi) - 1)) | ((k >> (hi - 1)) << (hi + 1));
    const long i00 = base;
    const long i01 = base | b0;
    const long i10 = base | b1;
    const long i11 = base | b0 | b1;
    const cxd a0 = amps[i00], a1 = amps[i01], a2 = amps[i10], a3 = amps[i11];
    amps[i00] = g(0, 0) * a0 + g(0, 1) * a1 + g(0, 2) * a2 + g(0, 3) * a3;
    amps[i01] = g(1, 0) * a0 + g(1, 1) * a1 + g(1, 2) * a2 + g(1, 3) * a3;
    amps[i10] = g(2, 0) * a0 + g(2, 1) * a1 + g(2, 2) * a2 + g(2, 3) * a3;
    amps[i11] = g(3, 0) * a0 + g(3, 1) * a1 + g(3, 2) * a2 + g(3, 3) * a3;
  };
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < quarter; ++k) body(k);
  } else {
    for (long k = 0; k < quarter; ++k) body(k);
  }
}

void apply_zz_phase(cxd* amps, int L, int j, int k, double c, Exec ex) {
  const long n = 1L << L;
  const cxd ep(std::cos(c), std::sin(c));
  const cxd em = std::conj(ep);
  const long bj = 1L << j, bk = 1L << k;
  auto body = [&](long i) {
    const bool same = ((i & bj) != 0) == ((i & bk) != 0);
    amps[i] *= same ? ep : em;
  };
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) body(i);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }
}

} // namespace qsim
