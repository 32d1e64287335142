#pragma once

#include "qsim/gates.hpp"

namespace qsim {

struct ModelSpec {
  int L = 2;
  double delta = 0.1;
  double J = 1.0;
};

// Isotropic Heisenberg chain with periodic boundary. Chain-length special
// forms: L=2 uses 2 s1.s2 (spectrum {2,2,2,-6}); L=3 uses the plain bond
// sum; even L >= 4 uses (J/2) times the bond sum.
ObservableSum xxx_hamiltonian(const ModelSpec& spec);

// One discrete evolution layer for even L: the even-pair sublayer of
// braided gates acts on the state first, then the odd-pair sublayer.
// This execution order is the one that conserves the charges exactly.
Circuit trotter_step_even(const ModelSpec& spec);

// Chain-of-3 layer: braided gates on site pairs (3,1), (2,3), (1,2) in
// execution order.
Circuit u3_step(double delta);

ObservableSum total_spin(int L, char axis);

// Three-site building block
//   s_i.s_j + s_j.s_k + delta^2 s_k.s_i - sign * delta * s_i.(s_j x s_k)
// with i, j, k zero-based qubit indices.
ObservableSum q1_local(int i, int j, int k, int sign, double delta, int L);

// Exactly conserved even-L charge: 1/(2(1+delta^2)) times the sum of
// q1_local over the staggered triples; L even and >= 4 only.
ObservableSum q1_charge(const ModelSpec& spec, int sign);

struct NearCharges {
  ObservableSum c1_plus, c1_minus, c2_plus, c2_minus;
};

// Chain-of-3 almost conserved charges; single-step drift is O(delta^2).
NearCharges near_charges_L3(double delta);

// max over reference states of |<obs> after - <obs> before|.
double conservation_drift(const Circuit& c, const ObservableSum& obs,
                          const std::vector<StateVector>& refs);

// Spectral norm of U^dag O U - O.
double operator_norm_drift(const Circuit& c, const ObservableSum& obs);

} // namespace qsim
