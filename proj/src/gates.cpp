#include "qsim/gates.hpp"

#include "qsim/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

constexpr double kPi = std::numbers::pi;

Mat4 local_cnot() {
  // local index = control bit + 2 * target bit
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(3, 1) = 1;
  m(1, 3) = 1;
  return m;
}

Mat local_matrix(const GateOp& op) {
  switch (op.kind) {
    case GateKind::RX: return rotation_matrix('X', op.params.at(0));
    case GateKind::RY: return rotation_matrix('Y', op.params.at(0));
    case GateKind::RZ: return rotation_matrix('Z', op.params.at(0));
    case GateKind::CNOT: return local_cnot();
    case GateKind::TwoQubitUnitary:
      if (op.label.rfind("checkR", 0) == 0) return check_r_matrix(op.params.at(0));
      throw std::invalid_argument("TwoQubitUnitary with unknown label: " + op.label);
  }
  throw std::logic_error("unreachable gate kind");
}

void validate_op(const GateOp& op, int L) {
  const bool single = op.kind == GateKind::RX || op.kind == GateKind::RY ||
                      op.kind == GateKind::RZ;
  if (single && (op.targets.size() != 1 || op.params.size() != 1))
    throw std::invalid_argument("rotation gate needs 1 target and 1 parameter");
  if (op.kind == GateKind::CNOT && (op.targets.size() != 2 || !op.params.empty()))
    throw std::invalid_argument("CNOT needs 2 targets and no parameters");
  if (op.kind == GateKind::TwoQubitUnitary && op.targets.size() != 2)
    throw std::invalid_argument("TwoQubitUnitary needs 2 targets");
  for (int t : op.targets)
    if (t < 0 || t >= L) throw std::invalid_argument("gate target out of range");
  if (op.targets.size() == 2 && op.targets[0] == op.targets[1])
    throw std::invalid_argument("gate targets must be distinct");
}

} // namespace

Circuit& Circuit::push(GateOp op) {
  validate_op(op, num_qubits);
  ops.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits != num_qubits)
    throw std::invalid_argument("append: qubit count mismatch");
  for (const auto& op : other.ops) ops.push_back(op);
  return *this;
}

Circuit Circuit::dagger() const {
  Circuit out(num_qubits);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    GateOp op = *it;
    if (!op.params.empty()) op.params[0] = -op.params[0];
    out.ops.push_back(std::move(op));
  }
  return out;
}

Mat2 rotation_matrix(char axis, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle not finite");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  switch (axis) {
    case 'X': m << c, cxd(0, -s), cxd(0, -s), c; break;
    case 'Y': m << c, -s, s, c; break;
    case 'Z': m << cxd(c, -s), 0, 0, cxd(c, s); break;
    default: throw std::invalid_argument("rotation axis must be X, Y or Z");
  }
  return m;
}

Mat4 cnot_matrix() { return local_cnot(); }

Mat4 check_r_matrix(double u) {
  if (!std::isfinite(u)) throw std::invalid_argument("check_r_matrix: u not finite");
  Mat4 p = Mat4::Zero();
  p(0, 0) = 1;
  p(1, 2) = 1;
  p(2, 1) = 1;
  p(3, 3) = 1;
  const cxd denom(1.0, u);
  return (Mat4::Identity() + cxd(0, u) * p) / denom;
}

Circuit decompose_check_r(double u, int qa, int qb, int L, RTemplate tpl) {
  const double th = std::atan(u) / 2;
  Circuit f(L);
  if (tpl == RTemplate::Kak3) {
    f.rx(qa, -kPi / 2).rx(qb, -kPi / 2);
    f.ry(qa, kPi).rz(qa, -kPi / 2).ry(qb, kPi);
    f.cnot(qb, qa);
    f.ry(qb, kPi / 2 - 2 * th);
    f.cnot(qa, qb);
    f.ry(qb, 2 * th - kPi / 2).rz(qa, kPi / 2 - 2 * th);
    f.cnot(qb, qa);
    f.ry(qa, kPi).rz(qb, kPi / 2).ry(qb, kPi);
    f.rx(qa, kPi / 2).rx(qb, kPi / 2);
  } else {
    f.cnot(qa, qb);
    f.ry(qa, -kPi / 2).rz(qb, -2 * th);
    f.cnot(qa, qb);
    f.rz(qb, 2 * th);
    f.cnot(qa, qb);
    f.rz(qa, -2 * th).ry(qa, kPi / 2);
    f.cnot(qa, qb);
  }
  return f;
}

Circuit zz_block(double a, int j, int k, int L) {
  if (j == k) throw std::invalid_argument("zz_block: j and k must differ");
  Circuit f(L);
  f.cnot(j, k).rz(k, -2 * a).cnot(j, k);
  return f;
}

Circuit decompose(const Circuit& c, RTemplate tpl) {
  Circuit out(c.num_qubits);
  for (const auto& op : c.ops) {
    if (op.kind == GateKind::TwoQubitUnitary) {
      Circuit frag = decompose_check_r(op.params.at(0), op.targets[0], op.targets[1],
                                       c.num_qubits, tpl);
      for (auto f : frag.ops) {
        f.state_prep = op.state_prep;
        out.ops.push_back(std::move(f));
      }
    } else {
      out.ops.push_back(op);
    }
  }
  return out;
}

Mat gate_matrix(const GateOp& op, int L) {
  return embed_operator(local_matrix(op), op.targets, L);
}

Mat circuit_unitary(const Circuit& c) {
  const long n = 1L << c.num_qubits;
  Mat u = Mat::Identity(n, n);
  for (const auto& op : c.ops) u = gate_matrix(op, c.num_qubits) * u;
  return u;
}

StateVector run_ideal(const Circuit& c, const StateVector& psi0) {
  if (psi0.num_qubits != c.num_qubits)
    throw std::invalid_argument("run_ideal: dimension mismatch");
  StateVector psi = psi0;
  for (const auto& op : c.ops) {
    const Mat g = local_matrix(op);
    if (op.targets.size() == 1)
      apply_1q(psi.amplitudes.data(), c.num_qubits, op.targets[0], Mat2(g));
    else
      apply_2q(psi.amplitudes.data(), c.num_qubits, op.targets[0], op.targets[1], Mat4(g));
  }
  return psi;
}

KrausChannel NoiseSpec::channel() const {
  switch (kind) {
    case ChannelKind::BitFlip: return bit_flip(p);
    case ChannelKind::Depolarizing: return depolarizing(p);
    case ChannelKind::AmplitudeDamping: return amplitude_damping(p);
    case ChannelKind::PhaseDamping: return phase_damping(p);
  }
  throw std::logic_error("unreachable channel kind");
}

DensityMatrix run_noisy(const Circuit& c, const DensityMatrix& rho0,
                        const NoiseSpec& noise, bool elementary) {
  if (rho0.num_qubits != c.num_qubits)
    throw std::invalid_argument("run_noisy: dimension mismatch");
  if (!(noise.p >= 0 && noise.p <= 1))
    throw std::invalid_argument("run_noisy: invalid noise spec");
  const Circuit ec = elementary ? decompose(c, noise.r_template) : c;
  const KrausChannel ch = noise.channel();
  DensityMatrix rho = rho0;
  for (const auto& op : ec.ops) {
    rho = apply_unitary_density(rho, local_matrix(op), op.targets);
    if (noise.p == 0) continue;
    if (op.state_prep && !noise.noisy_state_prep) continue;
    if (noise.placement == NoiseSpec::Placement::TwoQubitGatesOnly && !op.is_two_qubit())
      continue;
    for (int q : op.targets) rho = apply_kraus(rho, ch, q);
  }
  return rho;
}

GateCounts gate_counts(const Circuit& c) {
  GateCounts gc;
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: ++gc.single_qubit; break;
      case GateKind::CNOT: ++gc.cnot; break;
      case GateKind::TwoQubitUnitary:
        throw std::runtime_error("gate_counts: undecomposed two-qubit unitary present");
    }
  }
  return gc;
}

GateCounts gate_counts_accounting(const Circuit& c, Accounting mode, RTemplate tpl) {
  if (mode == Accounting::Template) return gate_counts(decompose(c, tpl));
  GateCounts gc;
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: ++gc.single_qubit; break;
      case GateKind::CNOT: ++gc.cnot; break;
      case GateKind::TwoQubitUnitary:
        gc.single_qubit += 5;
        gc.cnot += 4;
        break;
    }
  }
  return gc;
}

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case GateKind::RX: os << "RX"; break;
      case GateKind::RY: os << "RY"; break;
      case GateKind::RZ: os << "RZ"; break;
      case GateKind::CNOT: os << "CNOT"; break;
      case GateKind::TwoQubitUnitary: os << "CHECKR"; break;
    }
    for (int t : op.targets) os << ' ' << t;
    for (double p : op.params) os << ' ' << p;
    os << '\n';
  }
  return os.str();
}

Circuit circuit_from_text(const std::string& text, int L) {
  Circuit c(L);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "CNOT") {
      int a, b;
      if (!(ls >> a >> b)) throw std::invalid_argument("bad CNOT line: " + line);
      c.cnot(a, b);
    } else if (kind == "CHECKR") {
      int a, b;
      double u;
      if (!(ls >> a >> b >> u)) throw std::invalid_argument("bad CHECKR line: " + line);
      c.push({GateKind::TwoQubitUnitary, {a, b}, {u}, "checkR", false});
    } else if (kind == "RX" || kind == "RY" || kind == "RZ") {
      int q;
      double th;
      if (!(ls >> q >> th)) throw std::invalid_argument("bad rotation line: " + line);
      if (kind == "RX") c.rx(q, th);
      else if (kind == "RY") c.ry(q, th);
      else c.rz(q, th);
    } else {
      throw std::invalid_argument("unknown gate kind: " + kind);
    }
  }
  return c;
}

} // namespace qsim
