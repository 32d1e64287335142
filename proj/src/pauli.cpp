#include "qsim/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsim {

std::pair<long, cxd> PauliString::act(long index) const {
  long out = index;
  cxd phase(1.0, 0.0);
  for (int q = 0; q < num_qubits(); ++q) {
    const long bit = 1L << q;
    const bool b = (index & bit) != 0;
    switch (factors[q]) {
      case 'I': break;
      case 'X': out ^= bit; break;
      case 'Y': out ^= bit; phase *= b ? cxd(0, -1) : cxd(0, 1); break;
      case 'Z': if (b) phase = -phase; break;
      default: throw std::invalid_argument("PauliString: bad factor letter");
    }
  }
  return {out, phase};
}

Mat PauliString::dense() const {
  const long n = 1L << num_qubits();
  Mat m = Mat::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    auto [j, ph] = act(i);
    m(j, i) += coefficient * ph;
  }
  return m;
}

PauliString make_pauli(int L, std::initializer_list<std::pair<int, char>> sites,
                       double coeff) {
  PauliString p{std::string(static_cast<size_t>(L), 'I'), coeff};
  for (auto [q, f] : sites) {
    if (q < 0 || q >= L) throw std::invalid_argument("make_pauli: qubit out of range");
    p.factors[q] = f;
  }
  return p;
}

Mat ObservableSum::dense() const {
  if (terms.empty()) throw std::invalid_argument("ObservableSum: empty");
  const long n = 1L << num_qubits();
  Mat m = Mat::Zero(n, n);
  for (const auto& t : terms) m += t.dense();
  return m;
}

ObservableSum& ObservableSum::add(const PauliString& t) {
  if (!terms.empty() && t.num_qubits() != num_qubits())
    throw std::invalid_argument("ObservableSum: mixed qubit counts");
  terms.push_back(t);
  return *this;
}

ObservableSum& ObservableSum::add(const ObservableSum& o, double scale) {
  for (auto t : o.terms) {
    t.coefficient *= scale;
    add(t);
  }
  return *this;
}

std::string ObservableSum::to_text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : terms) os << t.coefficient << ' ' << t.factors << '\n';
  return os.str();
}

ObservableSum ObservableSum::from_text(const std::string& text) {
  ObservableSum o;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    PauliString t;
    if (!(ls >> t.coefficient >> t.factors))
      throw std::invalid_argument("ObservableSum: bad term line: " + line);
    o.add(t);
  }
  return o;
}

namespace {

double checked_real(cxd v, const char* what) {
  if (std::abs(v.imag()) >= kAlgebraTol)
    throw std::runtime_error(std::string(what) + ": imaginary residue too large");
  return v.real();
}

cxd raw_expectation(const StateVector& psi, const PauliString& p) {
  cxd acc(0, 0);
  const long n = psi.dim();
  for (long i = 0; i < n; ++i) {
    auto [j, ph] = p.act(i);
    acc += std::conj(psi.amplitudes[j]) * ph * psi.amplitudes[i];
  }
  return p.coefficient * acc;
}

cxd raw_expectation(const DensityMatrix& rho, const PauliString& p) {
  cxd acc(0, 0);
  const long n = rho.dim();
  for (long i = 0; i < n; ++i) {
    auto [j, ph] = p.act(i);
    acc += ph * rho.entries(i, j);
  }
  return p.coefficient * acc;
}

template <typename S>
cxd raw_expectation(const S& s, const ObservableSum& obs) {
  cxd acc(0, 0);
  for (const auto& t : obs.terms) acc += raw_expectation(s, t);
  return acc;
}

} // namespace

double expectation(const StateVector& psi, const PauliString& p) {
  if (psi.num_qubits != p.num_qubits())
    throw std::invalid_argument("expectation: dimension mismatch");
  return checked_real(raw_expectation(psi, p), "expectation");
}

double expectation(const StateVector& psi, const ObservableSum& obs) {
  if (psi.num_qubits != obs.num_qubits())
    throw std::invalid_argument("expectation: dimension mismatch");
  return checked_real(raw_expectation(psi, obs), "expectation");
}

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (rho.num_qubits != p.num_qubits())
    throw std::invalid_argument("expectation: dimension mismatch");
  return checked_real(raw_expectation(rho, p), "expectation");
}

double expectation(const DensityMatrix& rho, const ObservableSum& obs) {
  if (rho.num_qubits != obs.num_qubits())
    throw std::invalid_argument("expectation: dimension mismatch");
  return checked_real(raw_expectation(rho, obs), "expectation");
}

} // namespace qsim
