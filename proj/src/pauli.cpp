#include "hvec/pauli.hpp"

namespace hvec {

namespace {
int mod4(int v) { return ((v % 4) + 4) % 4; }
}  // namespace

PauliOp mul(const PauliOp& p, const PauliOp& q) {
  if (p.num_qubits() != q.num_qubits())
    throw DimensionError("PauliOp product requires equal lengths");
  int phase = p.phase_exp + q.phase_exp + 2 * static_cast<int>(p.z.dot(q.x));
  return PauliOp(p.x ^ q.x, p.z ^ q.z, mod4(phase));
}

PauliOp inverse(const PauliOp& p) {
  // (i^e X^x Z^z)^-1 = i^{-e} Z^z X^x = i^{-e} (-1)^{x.z} X^x Z^z.
  int phase = -p.phase_exp + 2 * static_cast<int>(p.x.dot(p.z));
  return PauliOp(p.x, p.z, mod4(phase));
}

bool commutes(const PauliOp& p, const PauliOp& q) {
  return !(p.x.dot(q.z) ^ q.x.dot(p.z));
}

PauliOp hadamard_conjugate(const PauliOp& p) {
  int phase = p.phase_exp + 2 * static_cast<int>(p.x.dot(p.z));
  return PauliOp(p.z, p.x, mod4(phase));
}

PauliOp sqrt_y_conjugate(const PauliOp& p) {
  int phase = p.phase_exp + 2 * (p.z.weight() + static_cast<int>(p.x.dot(p.z)));
  return PauliOp(p.z, p.x, mod4(phase));
}

TransversalMapResult transversal_error_map(const BitVec& a, const BitVec& x, const BitVec& z) {
  if (a.size() != x.size() || a.size() != z.size())
    throw DimensionError("transversal_error_map requires equal lengths");
  BitVec u = (~a & x) ^ (a & z);
  BitVec v = (~a & z) ^ (a & x);
  return TransversalMapResult{u, v, a.dot(u & v)};
}

PauliOp parse_pauli(const std::string& s) {
  size_t pos = 0;
  int phase = 0;
  int sign = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    sign = (s[pos] == '-') ? 2 : 0;
    ++pos;
    if (pos < s.size() && s[pos] == '1') {
      ++pos;
    } else if (pos < s.size() && s[pos] == 'i') {
      sign += 1;
      ++pos;
    }
  }
  phase = sign;
  int n = static_cast<int>(s.size() - pos);
  BitVec x(n), z(n);
  for (int i = 0; i < n; ++i) {
    switch (s[pos + i]) {
      case 'I':
        break;
      case 'X':
        x.set(i, true);
        break;
      case 'Z':
        z.set(i, true);
        break;
      case 'Y':
        x.set(i, true);
        z.set(i, true);
        phase += 1;  // Y = iXZ
        break;
      default:
        throw DomainError("Pauli string may contain only I/X/Y/Z sites");
    }
  }
  return PauliOp(x, z, phase);
}

std::string pauli_str(const PauliOp& p) {
  int n = p.num_qubits();
  int residual = p.phase_exp;
  std::string body;
  body.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool xb = p.x.get(i), zb = p.z.get(i);
    if (xb && zb) {
      body.push_back('Y');
      residual -= 1;
    } else if (xb) {
      body.push_back('X');
    } else if (zb) {
      body.push_back('Z');
    } else {
      body.push_back('I');
    }
  }
  static const char* tokens[4] = {"+", "+i", "-", "-i"};
  return tokens[((residual % 4) + 4) % 4] + body;
}

}  // namespace hvec
