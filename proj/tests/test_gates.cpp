#include <doctest.h>

#include "qsim/core_ops.hpp"
#include "qsim/gates.hpp"

#include <cmath>
#include <random>

using namespace qsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// largest-entry phase fit, then max elementwise distance
double phase_distance(const Mat& got, const Mat& want) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1;
  for (Eigen::Index i = 0; i < want.rows(); ++i)
    for (Eigen::Index j = 0; j < want.cols(); ++j)
      if (std::abs(want(i, j)) > best) {
        best = std::abs(want(i, j));
        bi = i;
        bj = j;
      }
  const cxd ph = got(bi, bj) / want(bi, bj);
  return (got - ph * want).cwiseAbs().maxCoeff();
}

Circuit random_circuit(int L, int depth, std::mt19937_64& rng) {
  Circuit c(L);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < depth; ++i) {
    switch (rng() % 5) {
      case 0: c.rx(static_cast<int>(rng() % L), angle(rng)); break;
      case 1: c.ry(static_cast<int>(rng() % L), angle(rng)); break;
      case 2: c.rz(static_cast<int>(rng() % L), angle(rng)); break;
      case 3: {
        int a = static_cast<int>(rng() % L);
        int b = (a + 1 + static_cast<int>(rng() % (L - 1))) % L;
        c.cnot(a, b);
        break;
      }
      default: {
        int a = static_cast<int>(rng() % L);
        int b = (a + 1 + static_cast<int>(rng() % (L - 1))) % L;
        c.push({GateKind::TwoQubitUnitary, {a, b}, {angle(rng)}, "checkR", false});
        break;
      }
    }
  }
  return c;
}

} // namespace

TEST_CASE("rotation_matrix conventions") {
  CHECK((rotation_matrix('Z', 0.0) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  Mat2 x_pi = rotation_matrix('X', kPi);
  Mat2 want;
  want << 0, cxd(0, -1), cxd(0, -1), 0; // -iX
  CHECK((x_pi - want).cwiseAbs().maxCoeff() < 1e-15);

  Vec v(2);
  v << 1, 0;
  Vec rotated = rotation_matrix('Y', kPi / 2) * v;
  CHECK(std::abs(rotated(0) - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(rotated(1) - cxd(1 / std::sqrt(2.0), 0)) < 1e-12);

  CHECK_THROWS(rotation_matrix('W', 0.5));
}

TEST_CASE("check_r_matrix algebra") {
  CHECK((check_r_matrix(0.0) - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // unitarity at 50 random u
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> us(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    Mat4 r = check_r_matrix(us(rng));
    CHECK((r * r.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // u=1 on |01> (basis index 1): ((1-i)|01> + (1+i)|10>)/2
  Mat4 r1 = check_r_matrix(1.0);
  CHECK(std::abs(r1(1, 1) - cxd(0.5, -0.5)) < 1e-15);
  CHECK(std::abs(r1(2, 1) - cxd(0.5, 0.5)) < 1e-15);
  CHECK(std::abs(std::abs(r1(1, 1)) - 1 / std::sqrt(2.0)) < 1e-15);

  // |00> and |11> are fixed for any u
  for (double u : {0.1, 0.5, -2.0}) {
    Mat4 r = check_r_matrix(u);
    CHECK(std::abs(r(0, 0) - cxd(1, 0)) < 1e-12);
    CHECK(std::abs(r(3, 3) - cxd(1, 0)) < 1e-12);
    CHECK(std::abs(r(1, 0)) < 1e-15);
    CHECK(std::abs(r(2, 0)) < 1e-15);
  }
}

TEST_CASE("braid relation holds with additive parameters") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> us(-1.5, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    const double u = us(rng), v = us(rng);
    Circuit lhs(3), rhs(3);
    // first-pushed gate acts first; the matrix product reads right to left
    lhs.push({GateKind::TwoQubitUnitary, {0, 1}, {v}, "checkR", false});
    lhs.push({GateKind::TwoQubitUnitary, {1, 2}, {u + v}, "checkR", false});
    lhs.push({GateKind::TwoQubitUnitary, {0, 1}, {u}, "checkR", false});
    rhs.push({GateKind::TwoQubitUnitary, {1, 2}, {u}, "checkR", false});
    rhs.push({GateKind::TwoQubitUnitary, {0, 1}, {u + v}, "checkR", false});
    rhs.push({GateKind::TwoQubitUnitary, {1, 2}, {v}, "checkR", false});
    CHECK((circuit_unitary(lhs) - circuit_unitary(rhs)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("decompositions match the dense oracle at 20 random parameters") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> us(-2.0, 2.0);
  for (auto tpl : {RTemplate::Kak3, RTemplate::Tally4}) {
    for (int i = 0; i < 20; ++i) {
      const double u = us(rng);
      Circuit frag = decompose_check_r(u, 0, 1, 2, tpl);
      CHECK(phase_distance(circuit_unitary(frag), Mat(check_r_matrix(u))) < 1e-8);
    }
    // identity case
    Circuit frag0 = decompose_check_r(0.0, 0, 1, 2, tpl);
    CHECK(phase_distance(circuit_unitary(frag0), Mat(Mat4::Identity())) < 1e-10);
    // fixed template: counts independent of u
    GateCounts c1 = gate_counts(decompose_check_r(0.37, 0, 1, 2, tpl));
    GateCounts c2 = gate_counts(decompose_check_r(-1.9, 0, 1, 2, tpl));
    CHECK(c1.single_qubit == c2.single_qubit);
    CHECK(c1.cnot == c2.cnot);
  }
  CHECK(gate_counts(decompose_check_r(0.37, 0, 1, 2, RTemplate::Kak3)).cnot == 3);
  CHECK(gate_counts(decompose_check_r(0.37, 0, 1, 2, RTemplate::Tally4)).cnot == 4);
  CHECK(gate_counts(decompose_check_r(0.37, 0, 1, 2, RTemplate::Tally4)).single_qubit == 5);
  // works on swapped/non-adjacent wires too
  Circuit frag = decompose_check_r(0.8, 2, 0, 3, RTemplate::Kak3);
  Mat want = embed_operator(check_r_matrix(0.8), {2, 0}, 3);
  CHECK(phase_distance(circuit_unitary(frag), want) < 1e-8);
}

TEST_CASE("zz_block composes to exp(i a ZZ)") {
  CHECK_THROWS_AS(zz_block(0.1, 1, 1, 2), std::invalid_argument);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> as(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double a = as(rng);
    Mat want(4, 4);
    want.setZero();
    for (int idx = 0; idx < 4; ++idx) {
      const int parity = (idx & 1) ^ ((idx >> 1) & 1);
      want(idx, idx) = std::exp(cxd(0, parity ? -a : a));
    }
    CHECK((circuit_unitary(zz_block(a, 0, 1, 2)) - want).cwiseAbs().maxCoeff() < 1e-10);
  }
  // a=0 is the identity and a=pi/4 keeps |00> on the unit circle
  CHECK(phase_distance(circuit_unitary(zz_block(0.0, 0, 1, 2)), Mat(Mat4::Identity())) <
        1e-12);
  StateVector out = run_ideal(zz_block(kPi / 4, 0, 1, 2), StateVector::zero_state(2));
  CHECK(std::abs(std::abs(out.amplitudes(0)) - 1.0) < 1e-12);
  CHECK(std::abs(out.amplitudes(0) - std::exp(cxd(0, kPi / 4))) < 1e-12);
}

TEST_CASE("circuit construction validates gates") {
  Circuit c(2);
  CHECK_THROWS(c.push({GateKind::RX, {0, 1}, {0.5}, "", false}));
  CHECK_THROWS(c.push({GateKind::RX, {0}, {}, "", false}));
  CHECK_THROWS(c.push({GateKind::CNOT, {0, 1}, {0.3}, "", false}));
  CHECK_THROWS(c.push({GateKind::CNOT, {0, 2}, {}, "", false}));
  CHECK_THROWS(c.push({GateKind::CNOT, {1, 1}, {}, "", false}));
  Circuit other(3);
  other.rx(2, 0.1);
  CHECK_THROWS(c.append(other));
}

TEST_CASE("run_ideal basics and inverse property") {
  StateVector psi = StateVector::zero_state(2);
  CHECK((run_ideal(Circuit(2), psi).amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() ==
        0.0);

  Circuit x0(2);
  x0.push({GateKind::RX, {0}, {kPi}, "", false});
  StateVector flipped = run_ideal(x0, psi);
  CHECK(std::abs(std::abs(flipped.amplitudes(1)) - 1.0) < 1e-12);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    Circuit c = random_circuit(3, 12, rng);
    StateVector fwd = run_ideal(c, StateVector::zero_state(3));
    StateVector back = run_ideal(c.dagger(), fwd);
    CHECK(std::abs(back.amplitudes(0) - cxd(1, 0)) < 1e-9);
    CHECK(std::abs(fwd.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("circuit_unitary is unitary for random circuits") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    Mat u = circuit_unitary(random_circuit(3, 15, rng));
    CHECK((u * u.adjoint() - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("run_noisy with p=0 equals the ideal evolution") {
  std::mt19937_64 rng(41);
  for (int L : {2, 3}) {
    Circuit c = random_circuit(L, 40, rng);
    NoiseSpec noise;
    noise.p = 0.0;
    DensityMatrix rho = run_noisy(c, DensityMatrix::zero_state(L), noise);
    StateVector psi = run_ideal(c, StateVector::zero_state(L));
    CHECK((rho.entries - DensityMatrix::from_state(psi).entries).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("run_noisy closed forms") {
  // X gate then bit-flip p: <Z> = -(1-2p)
  for (double p : {0.005, 0.1, 0.4}) {
    Circuit c(1);
    c.push({GateKind::RX, {0}, {kPi}, "", false});
    NoiseSpec noise;
    noise.kind = ChannelKind::BitFlip;
    noise.p = p;
    DensityMatrix rho = run_noisy(c, DensityMatrix::zero_state(1), noise);
    CHECK(expectation(rho, make_pauli(1, {{0, 'Z'}})) ==
          doctest::Approx(-(1 - 2 * p)).epsilon(1e-10));
  }

  // depolarizing p=1 after one gate: fully mixed
  Circuit c(1);
  c.rz(0, 0.3);
  NoiseSpec noise;
  noise.kind = ChannelKind::Depolarizing;
  noise.p = 1.0;
  DensityMatrix rho = run_noisy(c, DensityMatrix::zero_state(1), noise);
  CHECK(std::abs(expectation(rho, make_pauli(1, {{0, 'Z'}}))) < 1e-12);

  // trace preserved across channels and strengths
  std::mt19937_64 rng(43);
  Circuit rc = random_circuit(3, 20, rng);
  for (ChannelKind k : {ChannelKind::BitFlip, ChannelKind::Depolarizing,
                        ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping}) {
    for (double pv : {0.005, 0.01, 0.1}) {
      NoiseSpec ns;
      ns.kind = k;
      ns.p = pv;
      DensityMatrix out = run_noisy(rc, DensityMatrix::zero_state(3), ns);
      CHECK(std::abs(out.trace_real() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("noise placement and state-prep exemption switches") {
  // circuit of one prep gate and one plain gate
  Circuit c(1);
  c.push({GateKind::RX, {0}, {kPi}, "prep", true});
  c.push({GateKind::RZ, {0}, {0.0}, "", false});
  NoiseSpec noise;
  noise.kind = ChannelKind::BitFlip;
  noise.p = 0.25;

  // default: both gates noisy, two bit-flip applications
  DensityMatrix both = run_noisy(c, DensityMatrix::zero_state(1), noise);
  const double q = 1 - 2 * noise.p;
  CHECK(expectation(both, make_pauli(1, {{0, 'Z'}})) == doctest::Approx(-q * q));

  // exempting state prep leaves a single application
  noise.noisy_state_prep = false;
  DensityMatrix one = run_noisy(c, DensityMatrix::zero_state(1), noise);
  CHECK(expectation(one, make_pauli(1, {{0, 'Z'}})) == doctest::Approx(-q));

  // two-qubit-only placement skips single-qubit gates entirely
  noise.noisy_state_prep = true;
  noise.placement = NoiseSpec::Placement::TwoQubitGatesOnly;
  DensityMatrix none = run_noisy(c, DensityMatrix::zero_state(1), noise);
  CHECK(expectation(none, make_pauli(1, {{0, 'Z'}})) == doctest::Approx(-1.0));

  // and applies the channel on both qubits after a CNOT
  Circuit c2(2);
  c2.cnot(0, 1);
  DensityMatrix after = run_noisy(c2, DensityMatrix::zero_state(2), noise);
  CHECK(expectation(after, make_pauli(2, {{0, 'Z'}})) == doctest::Approx(q));
  CHECK(expectation(after, make_pauli(2, {{1, 'Z'}})) == doctest::Approx(q));
}

TEST_CASE("run_noisy decomposes braided gates per the selected template") {
  Circuit c(2);
  c.push({GateKind::TwoQubitUnitary, {0, 1}, {0.1}, "checkR", false});
  for (auto tpl : {RTemplate::Kak3, RTemplate::Tally4}) {
    NoiseSpec ns;
    ns.kind = ChannelKind::BitFlip;
    ns.p = 0.0;
    ns.r_template = tpl;
    DensityMatrix rho = run_noisy(c, DensityMatrix::zero_state(2), ns);
    StateVector psi = run_ideal(c, StateVector::zero_state(2));
    CHECK((rho.entries - DensityMatrix::from_state(psi).entries).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("gate_counts exact tallies and additivity") {
  CHECK(gate_counts(Circuit(2)).single_qubit == 0);
  CHECK(gate_counts(Circuit(2)).cnot == 0);

  GateCounts zz = gate_counts(zz_block(0.7, 0, 1, 2));
  CHECK(zz.single_qubit == 1);
  CHECK(zz.cnot == 2);

  Circuit undec(2);
  undec.push({GateKind::TwoQubitUnitary, {0, 1}, {0.1}, "checkR", false});
  CHECK_THROWS(gate_counts(undec));

  std::mt19937_64 rng(47);
  Circuit a = random_circuit(3, 9, rng), b = random_circuit(3, 7, rng);
  Circuit ab = a;
  ab.append(b);
  GateCounts ca = gate_counts_accounting(a, Accounting::Template);
  GateCounts cb = gate_counts_accounting(b, Accounting::Template);
  GateCounts cab = gate_counts_accounting(ab, Accounting::Template);
  CHECK(cab.single_qubit == ca.single_qubit + cb.single_qubit);
  CHECK(cab.cnot == ca.cnot + cb.cnot);

  // fixed-rate accounting books each braided gate as 5 singles + 4 CNOTs
  GateCounts fixed = gate_counts_accounting(undec, Accounting::FixedTally);
  CHECK(fixed.single_qubit == 5);
  CHECK(fixed.cnot == 4);
}

TEST_CASE("circuit text round-trip") {
  std::mt19937_64 rng(53);
  Circuit c = random_circuit(3, 14, rng);
  Circuit back = circuit_from_text(circuit_to_text(c), 3);
  REQUIRE(back.ops.size() == c.ops.size());
  CHECK((circuit_unitary(back) - circuit_unitary(c)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(circuit_from_text("RX 0\n", 2));
  CHECK_THROWS(circuit_from_text("WOBBLE 0 1\n", 2));
}
