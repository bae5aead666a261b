#pragma once

#include <string>

#include "hvec/bitvec.hpp"

namespace hvec {

// n-qubit Pauli operator in canonical form i^{phase_exp} X^x Z^z.
// The convention Y = iXZ is fixed globally, so Y^k = i^{|k|} X^k Z^k.
struct PauliOp {
  BitVec x;
  BitVec z;
  int phase_exp = 0;  // power of i, mod 4

  PauliOp() = default;
  PauliOp(BitVec x_, BitVec z_, int phase = 0)
      : x(x_), z(z_), phase_exp(((phase % 4) + 4) % 4) {
    if (x.size() != z.size()) throw DimensionError("PauliOp x/z length mismatch");
  }

  static PauliOp identity(int n) { return PauliOp(BitVec::zeros(n), BitVec::zeros(n)); }
  static PauliOp x_type(const BitVec& x) { return PauliOp(x, BitVec::zeros(x.size())); }
  static PauliOp z_type(const BitVec& z) { return PauliOp(BitVec::zeros(z.size()), z); }
  static PauliOp y_type(const BitVec& k) { return PauliOp(k, k, k.weight()); }

  int num_qubits() const { return x.size(); }
  bool is_identity_op() const { return x.is_zero() && z.is_zero(); }
  bool operator==(const PauliOp& o) const {
    return x == o.x && z == o.z && phase_exp == o.phase_exp;
  }
  bool operator!=(const PauliOp& o) const { return !(*this == o); }
};

// Exact product with phase tracking: Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1.
PauliOp mul(const PauliOp& p, const PauliOp& q);

PauliOp inverse(const PauliOp& p);

// True when p q = q p.
bool commutes(const PauliOp& p, const PauliOp& q);

// H^on (X^x Z^z) H^on = (-1)^{x.z} X^z Z^x, phase folded into phase_exp.
PauliOp hadamard_conjugate(const PauliOp& p);

// (sqrtY^dag)^on (X^x Z^z) (sqrtY)^on = (-1)^{|z|} (-1)^{x.z} X^z Z^x.
PauliOp sqrt_y_conjugate(const PauliOp& p);

// Masked X/Z exchange induced by a transversal-Hadamard layer on the support
// of a: u = (~a&x)^(a&z), v = (~a&z)^(a&x), alpha = a.(u&v). Involution in
// (x,z) for fixed a, and preserves x^z.
struct TransversalMapResult {
  BitVec u;
  BitVec v;
  bool alpha;
};
TransversalMapResult transversal_error_map(const BitVec& a, const BitVec& x, const BitVec& z);

// Text format: optional leading phase token {+1,+i,-1,-i} followed by one of
// {I,X,Y,Z} per qubit, e.g. "-iXYZ". A bare sign acts as the token sign.
PauliOp parse_pauli(const std::string& s);
std::string pauli_str(const PauliOp& p);

}  // namespace hvec
