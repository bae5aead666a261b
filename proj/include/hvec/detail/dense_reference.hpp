#pragma once

// Brute-force dense-matrix reference for Pauli algebra checks. Built from
// 2x2 constants and Kronecker products only; shares no code with the
// symplectic implementation it verifies. Used by tests and `hvec verify`.

#include <Eigen/Dense>
#include <complex>

#include "hvec/pauli.hpp"

namespace hvec::detail {

using RefMat = Eigen::MatrixXcd;

inline RefMat site_matrix(bool xb, bool zb) {
  RefMat m(2, 2);
  if (!xb && !zb)
    m << 1, 0, 0, 1;
  else if (xb && !zb)
    m << 0, 1, 1, 0;
  else if (!xb && zb)
    m << 1, 0, 0, -1;
  else
    m << 0, -1, 1, 0;  // X*Z
  return m;
}

inline RefMat kron(const RefMat& a, const RefMat& b) {
  RefMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Dense matrix of i^e X^x Z^z with qubit 0 as the least-significant index bit.
inline RefMat dense_pauli(const PauliOp& p) {
  int n = p.num_qubits();
  RefMat out = RefMat::Identity(1, 1);
  for (int i = n - 1; i >= 0; --i) out = kron(out, site_matrix(p.x.get(i), p.z.get(i)));
  std::complex<double> phase = 1.0;
  for (int k = 0; k < ((p.phase_exp % 4) + 4) % 4; ++k) phase *= std::complex<double>(0, 1);
  return phase * out;
}

inline double max_abs_diff(const RefMat& a, const RefMat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace hvec::detail
