#include "qsim/core_ops.hpp"

#include "qsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qsim {

namespace {

void check_targets(const std::vector<int>& targets, int L, long local_dim) {
  if (local_dim != (1L << targets.size()))
    throw std::invalid_argument("embed: local matrix dimension does not match target count");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= L)
      throw std::invalid_argument("embed: target out of range");
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("embed: duplicate target");
  }
}

void check_unitary(const Mat& g) {
  const Mat d = g.adjoint() * g - Mat::Identity(g.rows(), g.cols());
  if (d.cwiseAbs().maxCoeff() >= kAlgebraTol)
    throw std::invalid_argument("gate is not unitary within tolerance");
}

} // namespace

Mat embed_operator(const Mat& local, const std::vector<int>& targets, int L) {
  if (local.rows() != local.cols() || (local.rows() != 2 && local.rows() != 4))
    throw std::invalid_argument("embed: local matrix must be 2x2 or 4x4");
  check_targets(targets, L, local.rows());
  const long n = 1L << L;
  const int k = static_cast<int>(targets.size());
  const long kd = 1L << k;
  long target_mask = 0;
  for (int t : targets) target_mask |= 1L << t;
  Mat out = Mat::Zero(n, n);
  for (long col = 0; col < n; ++col) {
    long loc = 0;
    for (int b = 0; b < k; ++b)
      if (col & (1L << targets[b])) loc |= 1L << b;
    const long rest = col & ~target_mask;
    for (long locp = 0; locp < kd; ++locp) {
      const cxd v = local(locp, loc);
      if (v == cxd(0, 0)) continue;
      long row = rest;
      for (int b = 0; b < k; ++b)
        if (locp & (1L << b)) row |= 1L << targets[b];
      out(row, col) += v;
    }
  }
  return out;
}

StateVector apply_unitary_state(const StateVector& psi, const Mat& gate,
                                const std::vector<int>& targets) {
  check_unitary(gate);
  check_targets(targets, psi.num_qubits, gate.rows());
  StateVector out = psi;
  if (targets.size() == 1) {
    apply_1q(out.amplitudes.data(), psi.num_qubits, targets[0], Mat2(gate));
  } else {
    apply_2q(out.amplitudes.data(), psi.num_qubits, targets[0], targets[1], Mat4(gate));
  }
  return out;
}

DensityMatrix apply_unitary_density(const DensityMatrix& rho, const Mat& gate,
                                    const std::vector<int>& targets) {
  check_unitary(gate);
  check_targets(targets, rho.num_qubits, gate.rows());
  const Mat u = embed_operator(gate, targets, rho.num_qubits);
  Mat m = u * rho.entries * u.adjoint();
  return DensityMatrix(std::move(m), rho.num_qubits);
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& ch, int target) {
  const auto v = validate_channel(ch);
  if (!v.ok) throw std::invalid_argument("apply_kraus: " + v.detail);
  const long n = rho.dim();
  Mat acc = Mat::Zero(n, n);
  for (const auto& e : ch.kraus_ops) {
    const Mat ek = embed_operator(e, {target}, rho.num_qubits);
    acc += ek * rho.entries * ek.adjoint();
  }
  return DensityMatrix(std::move(acc), rho.num_qubits);
}

double sample_expectation(const DensityMatrix& rho, const PauliString& obs,
                          long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_expectation: shots must be >= 1");
  const bool identity =
      obs.factors.find_first_not_of('I') == std::string::npos;
  if (identity) return obs.coefficient;
  PauliString unit = obs;
  unit.coefficient = 1.0;
  const double mean = expectation(rho, unit);
  double p_plus = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<long> dist(shots, p_plus);
  const long plus = dist(rng);
  return obs.coefficient * (2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0);
}

double fidelity_overlap(const StateVector& psi1, const StateVector& psi2) {
  if (psi1.num_qubits != psi2.num_qubits)
    throw std::invalid_argument("fidelity_overlap: dimension mismatch");
  return std::abs(psi1.amplitudes.dot(psi2.amplitudes));
}

} // namespace qsim
