#pragma once

#include <complex>
#include <Eigen/Dense>

namespace qsim {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

// Tolerances used across validation checks.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kEigenPosTol = 1e-8;
inline constexpr double kCompletenessTol = 1e-12;

inline Eigen::Index dim_of(int num_qubits) { return Eigen::Index{1} << num_qubits; }

} // namespace qsim
