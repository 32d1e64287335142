#include "qsim/model.hpp"

#include <stdexcept>

namespace qsim {

namespace {

void add_dot(ObservableSum& o, int a, int b, double coeff, int L) {
  for (char f : {'X', 'Y', 'Z'}) o.add(make_pauli(L, {{a, f}, {b, f}}, coeff));
}

void check_hermitian(const ObservableSum& o, const char* what) {
  const Mat m = o.dense();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() >= 1e-12)
    throw std::runtime_error(std::string(what) + ": assembled operator is not Hermitian");
}

} // namespace

ObservableSum xxx_hamiltonian(const ModelSpec& spec) {
  const int L = spec.L;
  if (L < 2) throw std::invalid_argument("xxx_hamiltonian: L >= 2 required");
  ObservableSum h;
  if (L == 2) {
    add_dot(h, 0, 1, 2.0 * spec.J, 2);
    return h;
  }
  const double coeff = L == 3 ? spec.J : spec.J / 2;
  for (int i = 0; i < L; ++i) add_dot(h, i, (i + 1) % L, coeff, L);
  return h;
}

Circuit trotter_step_even(const ModelSpec& spec) {
  const int L = spec.L;
  if (L < 2 || L % 2 != 0)
    throw std::invalid_argument("trotter_step_even: L must be even (chain of 3 has its own step)");
  Circuit c(L);
  auto push_r = [&](int qa, int qb) {
    c.push({GateKind::TwoQubitUnitary, {qa, qb}, {spec.delta}, "checkR", false});
  };
  // Site pairs (2j, 2j+1), j = 1..L/2, with site L+1 wrapping to 1; these
  // act on the state first.
  for (int j = 1; j <= L / 2; ++j) push_r((2 * j - 1) % L, (2 * j) % L);
  // Site pairs (2j-1, 2j).
  for (int j = 1; j <= L / 2; ++j) push_r(2 * j - 2, 2 * j - 1);
  return c;
}

Circuit u3_step(double delta) {
  Circuit c(3);
  auto push_r = [&](int qa, int qb) {
    c.push({GateKind::TwoQubitUnitary, {qa, qb}, {delta}, "checkR", false});
  };
  push_r(2, 0);
  push_r(1, 2);
  push_r(0, 1);
  return c;
}

ObservableSum total_spin(int L, char axis) {
  if (axis != 'X' && axis != 'Y' && axis != 'Z')
    throw std::invalid_argument("total_spin: bad axis");
  ObservableSum o;
  for (int q = 0; q < L; ++q) o.add(make_pauli(L, {{q, axis}}));
  return o;
}

ObservableSum q1_local(int i, int j, int k, int sign, double delta, int L) {
  if (i == j || j == k || i == k)
    throw std::invalid_argument("q1_local: indices must be distinct");
  if (sign != 1 && sign != -1) throw std::invalid_argument("q1_local: sign must be +-1");
  ObservableSum o;
  add_dot(o, i, j, 1.0, L);
  add_dot(o, j, k, 1.0, L);
  add_dot(o, k, i, delta * delta, L);
  // s_i.(s_j x s_k) expanded with the Levi-Civita symbol.
  static constexpr struct { char a, b, c; double eps; } kCross[] = {
      {'X', 'Y', 'Z', 1},  {'Y', 'Z', 'X', 1},  {'Z', 'X', 'Y', 1},
      {'X', 'Z', 'Y', -1}, {'Z', 'Y', 'X', -1}, {'Y', 'X', 'Z', -1},
  };
  for (const auto& t : kCross)
    o.add(make_pauli(L, {{i, t.a}, {j, t.b}, {k, t.c}}, -sign * delta * t.eps));
  return o;
}

ObservableSum q1_charge(const ModelSpec& spec, int sign) {
  const int L = spec.L;
  if (L < 4 || L % 2 != 0)
    throw std::invalid_argument("q1_charge: defined for even L >= 4 only");
  const double pref = 1.0 / (2.0 * (1.0 + spec.delta * spec.delta));
  ObservableSum o;
  for (int n = 1; n <= L / 2; ++n) {
    // One-based site triples (2n-2, 2n-1, 2n) for the + charge and
    // (2n-1, 2n, 2n+1) for the - charge, wrapped; qubit index = site - 1.
    int qi, qj, qk;
    if (sign > 0) {
      qi = (2 * n - 2 + L - 1) % L;
      qj = 2 * n - 2;
      qk = 2 * n - 1;
    } else {
      qi = 2 * n - 2;
      qj = 2 * n - 1;
      qk = (2 * n) % L;
    }
    o.add(q1_local(qi, qj, qk, sign, spec.delta, L), pref);
  }
  check_hermitian(o, "q1_charge");
  return o;
}

NearCharges near_charges_L3(double delta) {
  NearCharges nc;
  // Site triples, one-based: C1 from (1,2,3); C2 from (3,1,2) + (2,3,1).
  nc.c1_plus = q1_local(0, 1, 2, +1, delta, 3);
  nc.c1_minus = q1_local(0, 1, 2, -1, delta, 3);
  for (int s : {+1, -1}) {
    ObservableSum c2;
    c2.add(q1_local(2, 0, 1, s, delta, 3));
    c2.add(q1_local(1, 2, 0, s, delta, 3));
    (s > 0 ? nc.c2_plus : nc.c2_minus) = std::move(c2);
  }
  for (const auto* o : {&nc.c1_plus, &nc.c1_minus, &nc.c2_plus, &nc.c2_minus})
    check_hermitian(*o, "near_charges_L3");
  return nc;
}

double conservation_drift(const Circuit& c, const ObservableSum& obs,
                          const std::vector<StateVector>& refs) {
  double worst = 0.0;
  for (const auto& psi : refs) {
    const double before = expectation(psi, obs);
    const double after = expectation(run_ideal(c, psi), obs);
    worst = std::max(worst, std::abs(after - before));
  }
  return worst;
}

double operator_norm_drift(const Circuit& c, const ObservableSum& obs) {
  const Mat u = circuit_unitary(c);
  const Mat o = obs.dense();
  const Mat d = u.adjoint() * o * u - o;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (d + d.adjoint()));
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace qsim
