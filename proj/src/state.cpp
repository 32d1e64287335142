#include "qsim/state.hpp"

#include <stdexcept>

namespace qsim {

StateVector::StateVector(Vec amps, int L) : amplitudes(std::move(amps)), num_qubits(L) {
  if (amplitudes.size() != dim_of(L))
    throw std::invalid_argument("StateVector: amplitude length is not 2^L");
}

StateVector StateVector::zero_state(int L) { return basis_state(L, 0); }

StateVector StateVector::basis_state(int L, long index) {
  if (L < 1 || index < 0 || index >= (1L << L))
    throw std::invalid_argument("StateVector: bad basis index");
  Vec v = Vec::Zero(dim_of(L));
  v[index] = 1.0;
  return StateVector(std::move(v), L);
}

DensityMatrix::DensityMatrix(Mat m, int L) : entries(std::move(m)), num_qubits(L) {
  if (entries.rows() != dim_of(L) || entries.cols() != dim_of(L))
    throw std::invalid_argument("DensityMatrix: shape is not 2^L x 2^L");
}

DensityMatrix DensityMatrix::zero_state(int L) {
  return from_state(StateVector::zero_state(L));
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  Mat m = psi.amplitudes * psi.amplitudes.adjoint();
  return DensityMatrix(std::move(m), psi.num_qubits);
}

DensityMatrix DensityMatrix::maximally_mixed(int L) {
  const long n = dim_of(L);
  Mat m = Mat::Identity(n, n) / static_cast<double>(n);
  return DensityMatrix(std::move(m), L);
}

double DensityMatrix::hermiticity_deviation() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (entries + entries.adjoint()));
  return es.eigenvalues().minCoeff();
}

} // namespace qsim
