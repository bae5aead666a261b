#include "hvec/vec_engine.hpp"

#include <bit>
#include <cmath>

namespace hvec {

namespace {

constexpr size_t kSummandCap = size_t{1} << 20;

uint64_t xz_key(uint64_t x, uint64_t z) { return (x << 32) | z; }

std::complex<double> i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

// Independent X-logical basis extracted from the full codeword list.
std::vector<BitVec> logical_basis(const ClassicalCode& code) {
  std::vector<BitVec> basis;
  uint64_t pivot[64] = {};
  for (const auto& l : code.logicals) {
    uint64_t v = l.word();
    while (v) {
      int h = 63 - std::countl_zero(v);
      if (!pivot[h]) {
        pivot[h] = v;
        basis.push_back(l);
        break;
      }
      v ^= pivot[h];
    }
  }
  return basis;
}

}  // namespace

StabilizerTrace::StabilizerTrace(const InputLogicalState& state) {
  const ClassicalCode& code = *state.code;
  n_ = code.n;
  if (n_ > 16) throw CapacityError("stabilizer-group enumeration supports n <= 16");

  std::vector<PauliOp> gens;
  if (state.label == LogicalState::ZeroL) {
    // |0...0> is stabilized by Z on every qubit.
    for (int i = 0; i < n_; ++i) gens.push_back(PauliOp::z_type(BitVec::unit(n_, i)));
  } else {
    // The uniform codeword superposition: Z checks plus X logicals.
    for (const auto& c : code.checks) gens.push_back(PauliOp::z_type(c));
    for (const auto& l : logical_basis(code))
      if (!l.is_zero()) gens.push_back(PauliOp::x_type(l));
  }

  std::vector<PauliOp> group{PauliOp::identity(n_)};
  for (const auto& g : gens) {
    size_t sz = group.size();
    for (size_t i = 0; i < sz; ++i) group.push_back(mul(group[i], g));
  }
  for (const auto& g : group) group_.emplace(xz_key(g.x.word(), g.z.word()), g.phase_exp);
}

std::complex<double> StabilizerTrace::trace(const PauliOp& p) const {
  if (p.num_qubits() != n_) throw DimensionError("StabilizerTrace: length mismatch");
  auto it = group_.find(xz_key(p.x.word(), p.z.word()));
  if (it == group_.end()) return 0.0;
  // Tr(P rho) = i^phase(P g) for the unique group element g sharing (x, z).
  PauliOp g(p.x, p.z, it->second);
  return i_power(mul(p, g).phase_exp);
}

double kept_component_weight(const ClassicalCode& code, const PauliChannel& ch,
                             const BitVec& k, const BitVec& u, const BitVec& v) {
  if (!code.is_logical(u) || !code.is_logical(v))
    throw DomainError("kept_component_weight: u and v must be logical supports");
  return ch.term_prob(u ^ k, v ^ k);
}

double compute_virtual_numerator(const ClassicalCode& code, const PauliChannel& ch,
                                 LogicalState state, const PauliOp& obs) {
  if (obs.num_qubits() != code.n)
    throw DimensionError("compute_virtual_numerator: observable length mismatch");
  auto leaders = code.leaders();
  size_t work = leaders.size() * code.logicals.size() * code.logicals.size();
  if (work > kSummandCap)
    throw CapacityError("virtual-numerator sum exceeds the 2^20 summand cap");

  InputLogicalState in{&code, state};
  StabilizerTrace st(in);
  double total = 0.0;
  for (const auto& k : leaders) {
    for (const auto& u : code.logicals) {
      for (const auto& v : code.logicals) {
        double p = ch.term_prob(u ^ k, v ^ k);
        if (p == 0.0) continue;
        // Tr(O X^{u+k} Z^{v+k} rho Z^{u+k} X^{v+k}) reduces, after the Y^k
        // correction and phase, to Tr(X^v Z^u O X^u Z^v rho).
        PauliOp q = mul(mul(PauliOp::x_type(v), PauliOp::z_type(u)),
                        mul(obs, mul(PauliOp::x_type(u), PauliOp::z_type(v))));
        total += p * st.trace(q).real();
      }
    }
  }
  return total;
}

double compute_p_full(const ClassicalCode& code, const PauliChannel& ch, LogicalState state) {
  return compute_virtual_numerator(code, ch, state, PauliOp::identity(code.n));
}

double compute_p_cor(const ClassicalCode& code, const PauliChannel& ch) {
  double total = 0.0;
  for (const auto& k : code.leaders()) total += ch.term_prob(k, k);
  return total;
}

double compute_p_max(const ClassicalCode& code, const PauliChannel& ch) {
  if (ch.factorized()) {
    // Per-site factorization: v_i = 0 contributes p_I + p_Y, v_i = 1
    // contributes p_X + p_Z.
    double total = 0.0;
    for (const auto& v : code.logicals) {
      double prod = 1.0;
      for (int i = 0; i < code.n; ++i) {
        const auto& s = ch.sites()[static_cast<size_t>(i)];
        prod *= v.get(i) ? (s[1] + s[3]) : (s[0] + s[2]);
      }
      total += prod;
    }
    return total;
  }
  double total = 0.0;
  for (const auto& v : code.logicals)
    for (const auto& t : ch.terms())
      if (t.z == (t.x ^ v.word())) total += t.p;
  return total;
}

VecAnalysis analyze(const ClassicalCode& code, const PauliChannel& ch, LogicalState state) {
  VecAnalysis a;
  a.p_cor = compute_p_cor(code, ch);
  a.p_full = compute_p_full(code, ch, state);
  a.p_max = compute_p_max(code, ch);
  a.p_logical_bound = a.p_max > 0.0 ? (a.p_max - a.p_cor) / a.p_max : 0.0;
  a.overhead = sampling_overhead(a.p_cor);
  return a;
}

LogicalErrorBound logical_error_bound(const VecAnalysis& a) {
  if (a.p_cor <= 0.0) throw DomainError("logical_error_bound requires p_cor > 0");
  LogicalErrorBound b;
  b.vs_pmax = (a.p_max - a.p_cor) / a.p_max;
  b.vs_pcor = (a.p_max - a.p_cor) / a.p_cor;
  return b;
}

double analytic_syndrome_prob(const ClassicalCode& code, const PauliChannel& ch,
                              const Syndrome& s) {
  BitVec leader = code.decode(s);
  // The x-part (z-part) marginals of the coset {leader ^ l : l logical}.
  double px = 0.0, pz = 0.0;
  for (const auto& l : code.logicals) {
    BitVec w = leader ^ l;
    if (ch.factorized()) {
      double mx = 1.0, mz = 1.0;
      for (int i = 0; i < code.n; ++i) {
        const auto& site = ch.sites()[static_cast<size_t>(i)];
        mx *= w.get(i) ? (site[1] + site[2]) : (site[0] + site[3]);
        mz *= w.get(i) ? (site[2] + site[3]) : (site[0] + site[1]);
      }
      px += mx;
      pz += mz;
    } else {
      for (const auto& t : ch.terms()) {
        if (t.x == w.word()) px += t.p;
        if (t.z == w.word()) pz += t.p;
      }
    }
  }
  return 0.5 * (px + pz);
}

namespace {

PauliOp swap_halves(const PauliOp& p) {
  int n2 = p.num_qubits();
  if (n2 % 2 != 0) throw DomainError("Swap transformation requires an even qubit count");
  int n = n2 / 2;
  auto sw = [n, n2](const BitVec& b) {
    uint64_t lo = b.word() & ((uint64_t{1} << n) - 1);
    uint64_t hi = b.word() >> n;
    return BitVec(n2, hi | (lo << n));
  };
  return PauliOp(sw(p.x), sw(p.z), p.phase_exp);
}

}  // namespace

TransformCheck check_transformation(TransformKind kind, const PauliOp& e, const PauliOp& f) {
  if (e.num_qubits() != f.num_qubits())
    throw DimensionError("check_transformation: operand length mismatch");
  PauliOp lhs = mul(e, f);
  PauliOp target = PauliOp::identity(e.num_qubits());
  switch (kind) {
    case TransformKind::TransversalH:
      lhs = hadamard_conjugate(lhs);
      target = mul(PauliOp(f.z, BitVec::zeros(f.num_qubits()), f.phase_exp),
                   PauliOp(BitVec::zeros(e.num_qubits()), e.x, e.phase_exp));
      break;
    case TransformKind::TransversalSqrtY:
      lhs = sqrt_y_conjugate(lhs);
      target = mul(PauliOp(f.z, BitVec::zeros(f.num_qubits()), f.phase_exp),
                   PauliOp(BitVec::zeros(e.num_qubits()), e.x, e.phase_exp));
      break;
    case TransformKind::Swap:
      lhs = swap_halves(lhs);
      target = mul(swap_halves(f), swap_halves(e));
      break;
  }
  TransformCheck out;
  if (lhs.x == target.x && lhs.z == target.z) {
    out.holds = true;
    out.beta = i_power(lhs.phase_exp - target.phase_exp);
  }
  return out;
}

}  // namespace hvec
