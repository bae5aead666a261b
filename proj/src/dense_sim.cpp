#include "hvec/dense_sim.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

namespace hvec {

namespace {

constexpr int kDenseMaxQubits = 12;
constexpr double kDenominatorFloor = 1e-12;

using Mat2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

Mat2 gate_h() {
  Mat2 u;
  u << 1, 1, 1, -1;
  return u / std::sqrt(2.0);
}

Mat2 gate_x() {
  Mat2 u;
  u << 0, 1, 1, 0;
  return u;
}

Mat2 gate_s() {
  Mat2 u;
  u << cd(1, 0), 0, 0, cd(0, 1);
  return u;
}

// sqrt(Y) with (sqrtY)^2 = Y and (sqrtY (x) sqrtY)|Psi+> = i|Psi+>.
Mat2 gate_sqrt_y() {
  Mat2 u;
  u << 1, -1, 1, 1;
  return std::exp(cd(0, M_PI / 4)) / std::sqrt(2.0) * u;
}

// Cyclic Clifford X -> Y -> Z -> X.
Mat2 gate_c_xyz() {
  Mat2 u;
  u << cd(0.5, -0.5), cd(-0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5);
  return u;
}

cd i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

inline int parity(uint64_t v) { return std::popcount(v) & 1; }

struct FullMasks {
  uint64_t x = 0;
  uint64_t z = 0;
  int phase = 0;
};

FullMasks place(const PauliOp& p, int offset, int m) {
  if (offset + p.num_qubits() > m) throw DimensionError("Pauli placement exceeds register");
  return FullMasks{p.x.word() << offset, p.z.word() << offset, p.phase_exp};
}

}  // namespace

DensityOperator::DensityOperator(int m) : m_(m) {
  if (m < 1 || m > kDenseMaxQubits)
    throw CapacityError("dense representation supports 1..12 qubits");
  mat_ = Eigen::MatrixXcd::Zero(dim(), dim());
}

DensityOperator DensityOperator::pure_basis_state(int m, uint64_t index) {
  DensityOperator rho(m);
  rho.mat_(static_cast<int64_t>(index), static_cast<int64_t>(index)) = 1.0;
  return rho;
}

DensityOperator DensityOperator::from_matrix(Eigen::MatrixXcd mat) {
  int m = 0;
  while ((int64_t{1} << m) < mat.rows()) ++m;
  if (mat.rows() != mat.cols() || (int64_t{1} << m) != mat.rows())
    throw DimensionError("density matrix must be square with power-of-two size");
  DensityOperator rho(m);
  rho.mat_ = std::move(mat);
  return rho;
}

DensityOperator DensityOperator::bell_pair() {
  DensityOperator rho(2);
  rho.mat_(0, 0) = rho.mat_(0, 3) = rho.mat_(3, 0) = rho.mat_(3, 3) = 0.5;
  return rho;
}

void DensityOperator::apply_unitary_1q(int target, const Mat2& u) {
  apply_controlled_1q(-1, target, u);
}

void DensityOperator::apply_controlled_1q(int control, int target, const Mat2& u) {
  if (target < 0 || target >= m_ || target == control)
    throw DimensionError("bad 1q gate targets");
  const int64_t d = dim();
  const uint64_t tbit = uint64_t{1} << target;
  const uint64_t cbit = control >= 0 ? uint64_t{1} << control : 0;
  // Left factor: rows with the target bit paired, control bit set (if any).
  for (int64_t c = 0; c < d; ++c) {
    for (int64_t r = 0; r < d; ++r) {
      uint64_t ru = static_cast<uint64_t>(r);
      if ((ru & tbit) || (cbit && !(ru & cbit))) continue;
      int64_t r1 = static_cast<int64_t>(ru | tbit);
      cd a = mat_(r, c), b = mat_(r1, c);
      mat_(r, c) = u(0, 0) * a + u(0, 1) * b;
      mat_(r1, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  // Right factor U^dag on columns.
  for (int64_t r = 0; r < d; ++r) {
    for (int64_t c = 0; c < d; ++c) {
      uint64_t cu = static_cast<uint64_t>(c);
      if ((cu & tbit) || (cbit && !(cu & cbit))) continue;
      int64_t c1 = static_cast<int64_t>(cu | tbit);
      cd a = mat_(r, c), b = mat_(r, c1);
      mat_(r, c) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      mat_(r, c1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

void DensityOperator::apply_pauli(const PauliOp& p, int offset) {
  FullMasks f = place(p, offset, m_);
  const int64_t d = dim();
  Eigen::MatrixXcd out(d, d);
  for (int64_t r = 0; r < d; ++r) {
    uint64_t ru = static_cast<uint64_t>(r);
    int sr = parity(f.z & ru);
    for (int64_t c = 0; c < d; ++c) {
      uint64_t cu = static_cast<uint64_t>(c);
      double sign = (sr ^ parity(f.z & cu)) ? -1.0 : 1.0;
      out(r, c) = sign * mat_(static_cast<int64_t>(ru ^ f.x), static_cast<int64_t>(cu ^ f.x));
    }
  }
  mat_.swap(out);
}

void DensityOperator::apply_channel(const PauliChannel& ch, int offset) {
  if (offset + ch.n() > m_) throw DimensionError("channel placement exceeds register");
  const int64_t d = dim();
  if (ch.factorized()) {
    Eigen::MatrixXcd out(d, d);
    for (int q = 0; q < ch.n(); ++q) {
      const auto& s = ch.sites()[static_cast<size_t>(q)];
      const uint64_t b = uint64_t{1} << (offset + q);
      for (int64_t r = 0; r < d; ++r) {
        for (int64_t c = 0; c < d; ++c) {
          uint64_t ru = static_cast<uint64_t>(r), cu = static_cast<uint64_t>(c);
          double sz = ((ru ^ cu) & b) ? -1.0 : 1.0;
          out(r, c) = (s[0] + sz * s[3]) * mat_(r, c) +
                      (s[1] + sz * s[2]) *
                          mat_(static_cast<int64_t>(ru ^ b), static_cast<int64_t>(cu ^ b));
        }
      }
      mat_.swap(out);
    }
    return;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : ch.terms()) {
    const uint64_t x = t.x << offset, z = t.z << offset;
    for (int64_t r = 0; r < d; ++r) {
      uint64_t ru = static_cast<uint64_t>(r);
      int sr = parity(z & ru);
      for (int64_t c = 0; c < d; ++c) {
        uint64_t cu = static_cast<uint64_t>(c);
        double sign = (sr ^ parity(z & cu)) ? -1.0 : 1.0;
        out(r, c) +=
            t.p * sign * mat_(static_cast<int64_t>(ru ^ x), static_cast<int64_t>(cu ^ x));
      }
    }
  }
  mat_.swap(out);
}

void DensityOperator::project_pauli(const PauliOp& s, bool minus, int offset) {
  PauliOp sq = mul(s, s);
  if (!sq.is_identity_op() || sq.phase_exp != 0)
    throw DomainError("project_pauli requires an involutory stabilizer");
  FullMasks f = place(s, offset, m_);
  const cd ph = i_power(f.phase);
  const double sigma = minus ? -1.0 : 1.0;
  const int64_t d = dim();
  Eigen::MatrixXcd out(d, d);
  for (int64_t r = 0; r < d; ++r) {
    uint64_t ru = static_cast<uint64_t>(r);
    cd left = ph * (parity(f.z & (ru ^ f.x)) ? -1.0 : 1.0);  // S(r, r^x)
    for (int64_t c = 0; c < d; ++c) {
      uint64_t cu = static_cast<uint64_t>(c);
      cd right = ph * (parity(f.z & cu) ? -1.0 : 1.0);  // S(c^x, c)
      int64_t rx = static_cast<int64_t>(ru ^ f.x), cx = static_cast<int64_t>(cu ^ f.x);
      out(r, c) = 0.25 * (mat_(r, c) + sigma * (left * mat_(rx, c) + right * mat_(r, cx)) +
                          left * right * mat_(rx, cx));
    }
  }
  mat_.swap(out);
}

std::complex<double> DensityOperator::expectation(const PauliOp& p, int offset) const {
  FullMasks f = place(p, offset, m_);
  const cd ph = i_power(f.phase);
  const int64_t d = dim();
  cd sum = 0.0;
  for (int64_t a = 0; a < d; ++a) {
    uint64_t au = static_cast<uint64_t>(a);
    double sign = parity(f.z & au) ? -1.0 : 1.0;
    sum += sign * mat_(a, static_cast<int64_t>(au ^ f.x));
  }
  return ph * sum;
}

double DensityOperator::trace_real() const { return mat_.trace().real(); }

double DensityOperator::hermiticity_error() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityOperator::write_text(std::ostream& os) const {
  char buf[96];
  for (int64_t r = 0; r < dim(); ++r) {
    for (int64_t c = 0; c < dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%s%.17g,%.17g", c ? " " : "", mat_(r, c).real(),
                    mat_(r, c).imag());
      os << buf;
    }
    os << "\n";
  }
}

DensityOperator tensor(const DensityOperator& low, const DensityOperator& high) {
  int m = low.qubits() + high.qubits();
  if (m > kDenseMaxQubits) throw CapacityError("dense representation supports 1..12 qubits");
  DensityOperator out(m);
  Eigen::MatrixXcd mat(int64_t{1} << m, int64_t{1} << m);
  const int64_t dl = low.dim(), dh = high.dim();
  for (int64_t rh = 0; rh < dh; ++rh)
    for (int64_t ch = 0; ch < dh; ++ch)
      for (int64_t rl = 0; rl < dl; ++rl)
        for (int64_t cl = 0; cl < dl; ++cl)
          mat(rh * dl + rl, ch * dl + cl) = low.matrix()(rl, cl) * high.matrix()(rh, ch);
  return DensityOperator::from_matrix(std::move(mat));
}

// ---------------------------------------------------------------------------
// Circuit

struct Circuit::Step {
  enum class Kind { Unitary1q, Controlled1q, Channel, Project, Correction };
  Kind kind;
  int a = -1;
  int b = -1;
  Mat2 u = Mat2::Identity();
  std::optional<PauliChannel> ch;
  std::vector<PauliOp> stabilizers;
  int offset = 0;
  CorrectionRule rule;
};

Circuit::Circuit(int m) : m_(m) {}
Circuit::~Circuit() = default;
Circuit::Circuit(Circuit&&) noexcept = default;
Circuit& Circuit::operator=(Circuit&&) noexcept = default;

void Circuit::unitary_1q(int target, const Mat2& u) {
  Step s;
  s.kind = Step::Kind::Unitary1q;
  s.a = target;
  s.u = u;
  steps_.push_back(std::move(s));
}

void Circuit::controlled_1q(int control, int target, const Mat2& u) {
  Step s;
  s.kind = Step::Kind::Controlled1q;
  s.a = control;
  s.b = target;
  s.u = u;
  steps_.push_back(std::move(s));
}

void Circuit::channel(const PauliChannel& ch, int offset) {
  Step s;
  s.kind = Step::Kind::Channel;
  s.ch = ch;
  s.offset = offset;
  steps_.push_back(std::move(s));
}

void Circuit::project_stabilizers(std::vector<PauliOp> stabilizers, int offset) {
  if (stabilizers.size() > 20) throw CapacityError("projection round supports <= 20 stabilizers");
  Step s;
  s.kind = Step::Kind::Project;
  s.stabilizers = std::move(stabilizers);
  s.offset = offset;
  steps_.push_back(std::move(s));
}

void Circuit::classical_correction(CorrectionRule rule, int offset) {
  Step s;
  s.kind = Step::Kind::Correction;
  s.rule = std::move(rule);
  s.offset = offset;
  steps_.push_back(std::move(s));
}

void Circuit::enumerate_branches(
    const DensityOperator& initial,
    const std::function<void(const std::vector<BitVec>&, const DensityOperator&)>& fn) const {
  if (initial.qubits() != m_) throw DimensionError("circuit register size mismatch");
  std::vector<BitVec> syndromes;

  std::function<void(DensityOperator, size_t)> walk = [&](DensityOperator rho, size_t idx) {
    for (; idx < steps_.size(); ++idx) {
      const Step& st = steps_[idx];
      switch (st.kind) {
        case Step::Kind::Unitary1q:
          rho.apply_unitary_1q(st.a, st.u);
          break;
        case Step::Kind::Controlled1q:
          rho.apply_controlled_1q(st.a, st.b, st.u);
          break;
        case Step::Kind::Channel:
          rho.apply_channel(*st.ch, st.offset);
          break;
        case Step::Kind::Correction:
          rho.apply_pauli(st.rule(syndromes.back()), st.offset);
          break;
        case Step::Kind::Project: {
          int nb = static_cast<int>(st.stabilizers.size());
          for (uint64_t word = 0; word < (uint64_t{1} << nb); ++word) {
            DensityOperator branch = rho;
            for (int j = 0; j < nb; ++j)
              branch.project_pauli(st.stabilizers[static_cast<size_t>(j)], (word >> j) & 1,
                                   st.offset);
            syndromes.emplace_back(nb, word);
            walk(std::move(branch), idx + 1);
            syndromes.pop_back();
          }
          return;
        }
      }
    }
    fn(syndromes, rho);
  };
  walk(initial, 0);
}

// ---------------------------------------------------------------------------
// H-VEC builders

namespace {

// Frame Clifford V with V Z V^dag = sigma' for the biased-basis variant:
// sigma=Y keeps the standard frame, sigma=X uses S (code basis Z, gate
// H_ZY), sigma=Z uses C_XYZ (code basis X, gate H_XY).
Mat2 frame_matrix(PauliAxis sigma) {
  switch (sigma) {
    case PauliAxis::Y:
      return Mat2::Identity();
    case PauliAxis::X:
      return gate_s();
    default:
      return gate_c_xyz();
  }
}

// Symbolic conjugation of a Pauli by the transversal frame Clifford.
PauliOp frame_conjugate(const PauliOp& p, PauliAxis sigma) {
  if (sigma == PauliAxis::Y) return p;
  int n = p.num_qubits();
  PauliOp out = PauliOp::identity(n);
  out.phase_exp = p.phase_exp;
  for (int i = 0; i < n; ++i)
    if (p.x.get(i)) out = mul(out, PauliOp::y_type(BitVec::unit(n, i)));  // X -> Y
  for (int i = 0; i < n; ++i) {
    if (!p.z.get(i)) continue;
    // S: Z -> Z; C_XYZ: Z -> X.
    out = mul(out, sigma == PauliAxis::X ? PauliOp::z_type(BitVec::unit(n, i))
                                         : PauliOp::x_type(BitVec::unit(n, i)));
  }
  return out;
}

PauliOp correction_pauli(const BitVec& k, PauliAxis sigma) {
  switch (sigma) {
    case PauliAxis::Y:
      return PauliOp::y_type(k);
    case PauliAxis::X:
      return PauliOp::x_type(k);
    default:
      return PauliOp::z_type(k);
  }
}

DensityOperator prepare_data_register(const ClassicalCode& code, LogicalState state) {
  if (state == LogicalState::ZeroL)
    return DensityOperator::pure_basis_state(code.n, 0);
  const auto& cws = code.logicals;
  Eigen::MatrixXcd mat =
      Eigen::MatrixXcd::Zero(int64_t{1} << code.n, int64_t{1} << code.n);
  double amp = 1.0 / static_cast<double>(cws.size());
  for (const auto& a : cws)
    for (const auto& b : cws)
      mat(static_cast<int64_t>(a.word()), static_cast<int64_t>(b.word())) = amp;
  return DensityOperator::from_matrix(std::move(mat));
}

DensityOperator plus_states(int n_anc) {
  int64_t d = int64_t{1} << n_anc;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Constant(d, d, 1.0 / static_cast<double>(d));
  return DensityOperator::from_matrix(std::move(mat));
}

PauliOp with_ancilla_measurement(const PauliOp& data_op, int n_anc, int m) {
  uint64_t anc = (n_anc == 64) ? ~uint64_t{0} : (uint64_t{1} << n_anc) - 1;
  return PauliOp(BitVec(m, anc | (data_op.x.word() << n_anc)),
                 BitVec(m, data_op.z.word() << n_anc), data_op.phase_exp);
}

}  // namespace

VirtualEstimate run_hvec(const ClassicalCode& code, const PauliChannel& ch,
                         LogicalState state, const PauliOp& obs, HvecVariant variant,
                         bool apply_syndrome_phase) {
  const int n = code.n;
  if (ch.n() != n) throw DimensionError("run_hvec: channel qubit count mismatch");
  if (obs.num_qubits() != n) throw DimensionError("run_hvec: observable qubit count mismatch");

  const bool multi = variant.kind == HvecVariant::Kind::MultiAncillaH;
  const bool sqrt_y = variant.kind == HvecVariant::Kind::SqrtY;
  const bool biased = variant.kind == HvecVariant::Kind::BiasedBasis;
  const PauliAxis sigma = biased ? variant.sigma : PauliAxis::Y;
  const int n_anc = multi ? n : 1;
  const int m = n + n_anc;
  if (m > kDenseMaxQubits) throw CapacityError("run_hvec: register exceeds 12 qubits");

  Mat2 v = frame_matrix(sigma);
  Mat2 layer1 = gate_h(), layer2 = gate_h();
  if (sqrt_y) {
    layer1 = gate_sqrt_y();
    layer2 = gate_sqrt_y().adjoint();
  } else if (biased) {
    layer1 = layer2 = v * gate_h() * v.adjoint();
  }

  DensityOperator data = prepare_data_register(code, state);
  if (biased)
    for (int i = 0; i < n; ++i) data.apply_unitary_1q(i, v);
  DensityOperator rho = tensor(plus_states(n_anc), data);

  Circuit circ(m);
  for (int i = 0; i < n; ++i) circ.controlled_1q(multi ? i : 0, n_anc + i, layer1);
  circ.channel(ch, n_anc);
  for (int i = 0; i < n; ++i) circ.controlled_1q(multi ? i : 0, n_anc + i, layer2);

  std::vector<PauliOp> stabs;
  for (const auto& c : code.checks)
    stabs.push_back(sigma == PauliAxis::Z ? PauliOp::x_type(c) : PauliOp::z_type(c));
  circ.project_stabilizers(std::move(stabs), n_anc);

  PauliOp obs_f = frame_conjugate(obs, sigma);
  PauliOp meas_num = with_ancilla_measurement(obs_f, n_anc, m);
  PauliOp meas_den = with_ancilla_measurement(PauliOp::identity(n), n_anc, m);

  VirtualEstimate est;
  circ.enumerate_branches(rho, [&](const std::vector<BitVec>& synds, const DensityOperator& b) {
    BitVec k = code.decode(Syndrome{synds.back()});
    DensityOperator corrected = b;
    if (!k.is_zero()) corrected.apply_pauli(correction_pauli(k, sigma), n_anc);
    double w = 1.0;
    if (!sqrt_y && apply_syndrome_phase && (k.weight() & 1)) w = -1.0;
    est.numerator += w * corrected.expectation(meas_num).real();
    est.denominator += w * corrected.expectation(meas_den).real();
    est.per_syndrome[synds.back().word()] =
        VirtualEstimate::Branch{corrected.trace_real(), w};
  });
  est.denominator_ok = std::abs(est.denominator) > kDenominatorFloor;
  est.ratio = est.denominator_ok ? est.numerator / est.denominator : 0.0;
  return est;
}

VirtualEstimate run_hvec_repeated(const ClassicalCode& code, const PauliChannel& data_ch,
                                  const PauliChannel& check_ch, int rounds,
                                  LogicalState state, const PauliOp& obs) {
  const int n = code.n;
  if (rounds < 1) throw DomainError("run_hvec_repeated: rounds must be >= 1");
  if (data_ch.n() != n || check_ch.n() != n)
    throw DimensionError("run_hvec_repeated: channel qubit count mismatch");
  const int m = n + 1;
  if (m > kDenseMaxQubits) throw CapacityError("run_hvec_repeated: register exceeds 12 qubits");

  DensityOperator rho = tensor(plus_states(1), prepare_data_register(code, state));

  Circuit circ(m);
  for (int i = 0; i < n; ++i) circ.controlled_1q(0, 1 + i, gate_h());
  circ.channel(data_ch, 1);
  for (int i = 0; i < n; ++i) circ.controlled_1q(0, 1 + i, gate_h());
  for (int r = 0; r < rounds; ++r) {
    circ.channel(check_ch, 1);
    std::vector<PauliOp> stabs;
    for (const auto& c : code.checks) stabs.push_back(PauliOp::z_type(c));
    circ.project_stabilizers(std::move(stabs), 1);
  }

  PauliOp meas_num = with_ancilla_measurement(obs, 1, m);
  PauliOp meas_den = with_ancilla_measurement(PauliOp::identity(n), 1, m);

  VirtualEstimate est;
  circ.enumerate_branches(rho, [&](const std::vector<BitVec>& synds, const DensityOperator& b) {
    BitVec k = code.decode(Syndrome{synds.back()});
    DensityOperator corrected = b;
    if (!k.is_zero()) corrected.apply_pauli(PauliOp::y_type(k), 1);
    double w = (k.weight() & 1) ? -1.0 : 1.0;
    est.numerator += w * corrected.expectation(meas_num).real();
    est.denominator += w * corrected.expectation(meas_den).real();
    auto& branch = est.per_syndrome[synds.back().word()];
    branch.probability += corrected.trace_real();
    branch.signed_weight = w;
  });
  est.denominator_ok = std::abs(est.denominator) > kDenominatorFloor;
  est.ratio = est.denominator_ok ? est.numerator / est.denominator : 0.0;
  return est;
}

std::pair<double, double> equivalence_single_vs_multi_ancilla(const ClassicalCode& code,
                                                              const PauliChannel& ch,
                                                              LogicalState state,
                                                              const PauliOp& obs) {
  VirtualEstimate single = run_hvec(code, ch, state, obs, HvecVariant::single_ancilla_h());
  VirtualEstimate multi = run_hvec(code, ch, state, obs, HvecVariant::multi_ancilla_h());
  return {std::abs(single.numerator - multi.numerator),
          std::abs(single.denominator - multi.denominator)};
}

// ---------------------------------------------------------------------------
// Entanglement purification

namespace {

DensityOperator werner_pair(double p) {
  DensityOperator rho = DensityOperator::bell_pair();
  if (p > 0.0) rho.apply_channel(PauliChannel::depolarizing_product(1, p), 1);
  return rho;
}

DensityOperator ideal_pair() { return DensityOperator::bell_pair(); }

// Z (x) Z parity check of pair (q0, q1) fanned out through the ancilla pair
// (a0, a1), post-selected on even parity.
void zz_check(DensityOperator& rho, int q0, int q1, int a0, int a1) {
  rho.apply_controlled_1q(q0, a0, gate_x());
  rho.apply_controlled_1q(q1, a1, gate_x());
  int m = rho.qubits();
  BitVec z(m);
  z.set(a0, true);
  z.set(a1, true);
  rho.project_pauli(PauliOp::z_type(z), false);
}

double bell_fidelity(const DensityOperator& rho, int q0, int q1) {
  int m = rho.qubits();
  auto pair_op = [&](bool xs, bool zs) {
    BitVec x(m), z(m);
    if (xs) {
      x.set(q0, true);
      x.set(q1, true);
    }
    if (zs) {
      z.set(q0, true);
      z.set(q1, true);
    }
    int phase = (xs && zs) ? 2 : 0;  // YY = (iXZ)(iXZ) on two sites
    return PauliOp(x, z, phase);
  };
  // O_Bell = (1/4)(II + XX - YY + ZZ).
  double num = rho.trace_real() + rho.expectation(pair_op(true, false)).real() -
               rho.expectation(pair_op(true, true)).real() +
               rho.expectation(pair_op(false, true)).real();
  return 0.25 * num / rho.trace_real();
}

// Virtual ratio <X X (x) O_Bell> / <X X (x) I> with the X measurements on
// the C-layer control pair (c0, c1) and O_Bell on the purified pair.
double virtual_bell_fidelity(const DensityOperator& rho, int q0, int q1, int c0, int c1) {
  int m = rho.qubits();
  auto op = [&](bool xs, bool zs) {
    BitVec x(m), z(m);
    x.set(c0, true);
    x.set(c1, true);
    if (xs) {
      x.set(q0, true);
      x.set(q1, true);
    }
    if (zs) {
      z.set(q0, true);
      z.set(q1, true);
    }
    int phase = (xs && zs) ? 2 : 0;
    return PauliOp(x, z, phase);
  };
  double num = rho.expectation(op(false, false)).real() +
               rho.expectation(op(true, false)).real() -
               rho.expectation(op(true, true)).real() +
               rho.expectation(op(false, true)).real();
  double den = rho.expectation(op(false, false)).real();
  if (std::abs(den) < kDenominatorFloor)
    throw DomainError("virtual EPP denominator vanished (p at the Werner pole)");
  return 0.25 * num / den;
}

}  // namespace

double run_epp(EppVariant variant, WernerParam wp, bool check_noisy,
               DensityOperator* final_state) {
  const double p = wp.p;
  switch (variant) {
    case EppVariant::Conventional1: {
      // main (0,1), check (2,3)
      DensityOperator rho =
          tensor(werner_pair(p), check_noisy ? werner_pair(p) : ideal_pair());
      zz_check(rho, 0, 1, 2, 3);
      if (final_state) *final_state = rho;
      return bell_fidelity(rho, 0, 1);
    }
    case EppVariant::Conventional2: {
      // main (0,1); round-1 checks (2,3) and (6,7); second intermediate (4,5)
      DensityOperator rho = tensor(
          tensor(werner_pair(p), check_noisy ? werner_pair(p) : ideal_pair()),
          tensor(check_noisy ? werner_pair(p) : ideal_pair(),
                 check_noisy ? werner_pair(p) : ideal_pair()));
      zz_check(rho, 0, 1, 2, 3);
      zz_check(rho, 4, 5, 6, 7);
      for (int q : {0, 1, 4, 5}) rho.apply_unitary_1q(q, gate_h());
      zz_check(rho, 0, 1, 4, 5);
      rho.apply_unitary_1q(0, gate_h());
      rho.apply_unitary_1q(1, gate_h());
      if (final_state) *final_state = rho;
      return bell_fidelity(rho, 0, 1);
    }
    case EppVariant::Hvec:
    case EppVariant::SqrtY:
    case EppVariant::SymmetrizedH: {
      // main (0,1), C-layer controls (2,3), check (4,5)
      DensityOperator rho = tensor(
          tensor(werner_pair(p), werner_pair(p)),
          check_noisy ? werner_pair(p) : ideal_pair());
      if (variant == EppVariant::SqrtY) {
        // The omitted first C-sqrtY layer acts on the ideal pair as a
        // conditional i phase; the S gate on one control restores it.
        rho.apply_unitary_1q(2, gate_s());
        rho.apply_controlled_1q(2, 0, gate_sqrt_y().adjoint());
        rho.apply_controlled_1q(3, 1, gate_sqrt_y().adjoint());
      } else {
        rho.apply_controlled_1q(2, 0, gate_h());
        rho.apply_controlled_1q(3, 1, gate_h());
      }
      zz_check(rho, 0, 1, 4, 5);
      if (variant == EppVariant::SymmetrizedH) {
        rho.apply_controlled_1q(2, 0, gate_h());
        rho.apply_controlled_1q(3, 1, gate_h());
      }
      if (final_state) *final_state = rho;
      return virtual_bell_fidelity(rho, 0, 1, 2, 3);
    }
  }
  throw DomainError("unknown EPP variant");
}

}  // namespace hvec
