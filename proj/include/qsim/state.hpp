#pragma once

#include "qsim/types.hpp"

namespace qsim {

struct StateVector {
  Vec amplitudes;
  int num_qubits = 0;

  StateVector() = default;
  StateVector(Vec amps, int L);

  // |0...0> on L qubits.
  static StateVector zero_state(int L);
  static StateVector basis_state(int L, long index);

  double norm() const { return amplitudes.norm(); }
  long dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
  Mat entries;
  int num_qubits = 0;

  DensityMatrix() = default;
  DensityMatrix(Mat m, int L);

  static DensityMatrix zero_state(int L);
  static DensityMatrix from_state(const StateVector& psi);
  static DensityMatrix maximally_mixed(int L);

  double trace_real() const { return entries.trace().real(); }
  double hermiticity_deviation() const;
  // Smallest eigenvalue; used by positivity checks in tests.
  double min_eigenvalue() const;
  long dim() const { return entries.rows(); }
};

} // namespace qsim
