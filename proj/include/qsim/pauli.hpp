#pragma once

#include "qsim/state.hpp"
#include "qsim/types.hpp"

#include <string>
#include <vector>

namespace qsim {

// One product of single-site Pauli factors with a real coefficient.
// factors[q] is the letter acting on qubit q, e.g. "XZI" = X on qubit 0,
// Z on qubit 1, identity on qubit 2.
struct PauliString {
  std::string factors;
  double coefficient = 1.0;

  int num_qubits() const { return static_cast<int>(factors.size()); }
  // Action on a basis index: P|i> = phase * |flipped>.
  // Returned phase excludes the coefficient.
  std::pair<long, cxd> act(long index) const;
  Mat dense() const;
};

PauliString make_pauli(int L, std::initializer_list<std::pair<int, char>> sites,
                       double coeff = 1.0);

struct ObservableSum {
  std::vector<PauliString> terms;

  int num_qubits() const { return terms.empty() ? 0 : terms.front().num_qubits(); }
  Mat dense() const;
  ObservableSum& add(const PauliString& t);
  ObservableSum& add(const ObservableSum& o, double scale = 1.0);

  // Line format "coefficient letters", one term per row.
  std::string to_text() const;
  static ObservableSum from_text(const std::string& text);
};

double expectation(const StateVector& psi, const PauliString& p);
double expectation(const StateVector& psi, const ObservableSum& obs);
double expectation(const DensityMatrix& rho, const PauliString& p);
double expectation(const DensityMatrix& rho, const ObservableSum& obs);

} // namespace qsim
