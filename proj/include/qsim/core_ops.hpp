#pragma once

#include "qsim/noise.hpp"
#include "qsim/pauli.hpp"
#include "qsim/state.hpp"

#include <cstdint>
#include <vector>

namespace qsim {

// Identity on non-target qubits tensored with the local matrix on the
// targets; targets[0] is the low bit of the local index. k in {2, 4}.
Mat embed_operator(const Mat& local, const std::vector<int>& targets, int L);

StateVector apply_unitary_state(const StateVector& psi, const Mat& gate,
                                const std::vector<int>& targets);
DensityMatrix apply_unitary_density(const DensityMatrix& rho, const Mat& gate,
                                    const std::vector<int>& targets);
DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& ch, int target);

// Monte Carlo estimate of a single Pauli expectation from projective
// measurement statistics; deterministic for fixed seed.
double sample_expectation(const DensityMatrix& rho, const PauliString& obs,
                          long shots, std::uint64_t seed);

// |<psi1|psi2>|
double fidelity_overlap(const StateVector& psi1, const StateVector& psi2);

} // namespace qsim
