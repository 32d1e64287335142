#pragma once

#include "qsim/core_ops.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsim {

enum class GateKind { RX, RY, RZ, CNOT, TwoQubitUnitary };

struct GateOp {
  GateKind kind;
  std::vector<int> targets;
  std::vector<double> params;
  std::string label;
  bool state_prep = false; // marks input-encoding gates for the noise exemption switch

  bool is_two_qubit() const { return targets.size() == 2; }
};

struct Circuit {
  int num_qubits = 0;
  std::vector<GateOp> ops;

  explicit Circuit(int L = 0) : num_qubits(L) {}
  Circuit& push(GateOp op);
  Circuit& rx(int q, double th) { return push({GateKind::RX, {q}, {th}, "", false}); }
  Circuit& ry(int q, double th) { return push({GateKind::RY, {q}, {th}, "", false}); }
  Circuit& rz(int q, double th) { return push({GateKind::RZ, {q}, {th}, "", false}); }
  Circuit& cnot(int c, int t) { return push({GateKind::CNOT, {c, t}, {}, "", false}); }
  Circuit& append(const Circuit& other); // other.num_qubits must match
  Circuit dagger() const;
};

// exp(-i th A/2) for A in {X, Y, Z}.
Mat2 rotation_matrix(char axis, double theta);
Mat2 cnot_target_block(); // the X block; full CNOT realized in gate_matrix
Mat4 cnot_matrix();       // targets ordering (control, target) = (low bit, high bit)

// Braided two-site gate (1 + i u P) / (1 + i u) with P the swap.
Mat4 check_r_matrix(double u);

// Executable decomposition templates for the braided gate.
//  Kak3: 3 CNOTs + 13 single-qubit rotations, X-framed so that pure
//        dephasing does not commute through it trivially.
//  Tally4: 4 CNOTs + 5 single-qubit rotations, matching the fixed
//        bookkeeping rate used by gate_counts_accounting.
enum class RTemplate { Kak3, Tally4 };

// Two-qubit fragment acting on qubits {qa, qb} of an L-qubit circuit;
// composes to check_r_matrix(u) up to global phase.
Circuit decompose_check_r(double u, int qa, int qb, int L,
                          RTemplate tpl = RTemplate::Kak3);
inline Circuit decompose_check_r(double u, RTemplate tpl = RTemplate::Kak3) {
  return decompose_check_r(u, 0, 1, 2, tpl);
}

// CNOT(j,k) RZ(-2a on k) CNOT(j,k) = exp(i a Z_j Z_k).
Circuit zz_block(double a, int j, int k, int L);

// Expand TwoQubitUnitary ops into the chosen template; elementary ops pass through.
Circuit decompose(const Circuit& c, RTemplate tpl = RTemplate::Kak3);

// Dense matrix of one gate op embedded into L qubits.
Mat gate_matrix(const GateOp& op, int L);
// Dense unitary of the whole circuit (oracle/testing path).
Mat circuit_unitary(const Circuit& c);

StateVector run_ideal(const Circuit& c, const StateVector& psi0);

struct NoiseSpec {
  ChannelKind kind = ChannelKind::BitFlip;
  double p = 0.0;
  // Where the channel is inserted:
  //  PerGateOnTargets: after every elementary gate, on each touched qubit.
  //  TwoQubitGatesOnly: after CNOTs only; calibrated mode used by the
  //    chain-of-3 headline comparisons.
  enum class Placement { PerGateOnTargets, TwoQubitGatesOnly };
  Placement placement = Placement::PerGateOnTargets;
  bool noisy_state_prep = true; // apply noise to input-encoding gates too
  RTemplate r_template = RTemplate::Kak3;

  KrausChannel channel() const;
};

DensityMatrix run_noisy(const Circuit& c, const DensityMatrix& rho0,
                        const NoiseSpec& noise, bool elementary = true);

struct GateCounts {
  long single_qubit = 0;
  long cnot = 0;
  long total() const { return single_qubit + cnot; }
};

// Exact tallies; throws if an undecomposed TwoQubitUnitary is present.
GateCounts gate_counts(const Circuit& c);

enum class Accounting { Template, FixedTally };

// Template mode decomposes then counts; tally mode books each braided
// gate at the fixed rate (5 single-qubit, 4 CNOT).
GateCounts gate_counts_accounting(const Circuit& c, Accounting mode,
                                  RTemplate tpl = RTemplate::Kak3);

// Line-oriented text form, one gate per line: KIND target(s) param(s).
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text, int L);

} // namespace qsim
