#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "hvec/channels.hpp"
#include "hvec/codes.hpp"
#include "hvec/vec_engine.hpp"

namespace hvec {

// Exact 2^m x 2^m density operator. Qubit q is bit q of the basis-state
// index; circuit builders place ancilla(s) first (low bits), data last.
class DensityOperator {
 public:
  explicit DensityOperator(int m);

  static DensityOperator pure_basis_state(int m, uint64_t index);
  static DensityOperator from_matrix(Eigen::MatrixXcd mat);
  // |Psi+><Psi+| on two qubits.
  static DensityOperator bell_pair();

  int qubits() const { return m_; }
  int64_t dim() const { return int64_t{1} << m_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  void apply_unitary_1q(int target, const Eigen::Matrix2cd& u);
  void apply_controlled_1q(int control, int target, const Eigen::Matrix2cd& u);
  // rho -> P rho P^dag with p acting on qubits [offset, offset + p.n).
  void apply_pauli(const PauliOp& p, int offset = 0);
  // Kraus sum over the channel's Pauli terms.
  void apply_channel(const PauliChannel& ch, int offset = 0);
  // rho -> Pi rho Pi with Pi = (I + (-1)^minus S)/2; S must square to I.
  void project_pauli(const PauliOp& s, bool minus, int offset = 0);

  std::complex<double> expectation(const PauliOp& p, int offset = 0) const;
  double trace_real() const;
  double hermiticity_error() const;

  // Debug dump: row-major "re,im" pairs, one row per line.
  void write_text(std::ostream& os) const;

 private:
  int m_;
  Eigen::MatrixXcd mat_;
};

// low occupies the low index bits, high the high ones.
DensityOperator tensor(const DensityOperator& low, const DensityOperator& high);

// Circuit instruction list over a fixed register. Stabilizer projections
// branch the execution tree; classical corrections act per branch using the
// most recent syndrome.
class Circuit {
 public:
  using CorrectionRule = std::function<PauliOp(const BitVec& syndrome)>;

  explicit Circuit(int m);
  ~Circuit();
  Circuit(Circuit&&) noexcept;
  Circuit& operator=(Circuit&&) noexcept;

  void unitary_1q(int target, const Eigen::Matrix2cd& u);
  void controlled_1q(int control, int target, const Eigen::Matrix2cd& u);
  void channel(const PauliChannel& ch, int offset);
  // One projection round over the given stabilizers; every outcome
  // assignment becomes a branch labeled by its syndrome word.
  void project_stabilizers(std::vector<PauliOp> stabilizers, int offset);
  void classical_correction(CorrectionRule rule, int offset);

  int qubits() const { return m_; }

  // Runs every projection branch; fn receives the per-round syndromes and
  // the final (unnormalized) branch state.
  void enumerate_branches(const DensityOperator& initial,
                          const std::function<void(const std::vector<BitVec>&,
                                                   const DensityOperator&)>& fn) const;

 private:
  struct Step;
  int m_;
  std::vector<Step> steps_;
};

struct VirtualEstimate {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool denominator_ok = false;

  struct Branch {
    double probability = 0.0;
    double signed_weight = 1.0;
  };
  std::map<uint64_t, Branch> per_syndrome;  // keyed by final syndrome word
};

struct HvecVariant {
  enum class Kind { SingleAncillaH, MultiAncillaH, SqrtY, BiasedBasis };
  Kind kind = Kind::SingleAncillaH;
  PauliAxis sigma = PauliAxis::Y;  // BiasedBasis only

  static HvecVariant single_ancilla_h() { return {Kind::SingleAncillaH, PauliAxis::Y}; }
  static HvecVariant multi_ancilla_h() { return {Kind::MultiAncillaH, PauliAxis::Y}; }
  static HvecVariant sqrt_y() { return {Kind::SqrtY, PauliAxis::Y}; }
  static HvecVariant biased(PauliAxis sigma) { return {Kind::BiasedBasis, sigma}; }
};

// Exact branch enumeration of the H-VEC circuit family. The observable is
// given in the standard Z-code frame; biased variants conjugate state,
// gates, checks, corrections and observable internally.
// apply_syndrome_phase = false drops the (-1)^|k| software phase (mutation
// hook; the SqrtY variant never applies it).
VirtualEstimate run_hvec(const ClassicalCode& code, const PauliChannel& ch,
                         LogicalState state, const PauliOp& obs, HvecVariant variant,
                         bool apply_syndrome_phase = true);

// Repeated stabilizer rounds without repeating the C-H layers; check_ch is
// applied before each projection round and the final syndrome drives the
// correction. Exact when the accumulated supports stay correctable and the
// check noise is pure Y.
VirtualEstimate run_hvec_repeated(const ClassicalCode& code, const PauliChannel& data_ch,
                                  const PauliChannel& check_ch, int rounds,
                                  LogicalState state, const PauliOp& obs);

// Runs single- and multi-ancilla variants; returns |delta numerator| and
// |delta denominator|.
std::pair<double, double> equivalence_single_vs_multi_ancilla(const ClassicalCode& code,
                                                              const PauliChannel& ch,
                                                              LogicalState state,
                                                              const PauliOp& obs);

enum class EppVariant { Conventional1, Conventional2, Hvec, SqrtY, SymmetrizedH };

// 2-to-1 entanglement purification fidelity F = Tr(|Psi+><Psi+| rho_pur) /
// Tr(rho_pur). Post-selection on even check parity is a normalised
// projection; virtual variants take the <XX (x) O_Bell> / <XX (x) I> ratio.
// check_noisy controls whether the stabilizer-check Bell pair(s) are Werner
// states or ideal. When final_state is non-null it receives the
// post-selected pre-measurement register (debug dump hook).
double run_epp(EppVariant variant, WernerParam p, bool check_noisy,
               DensityOperator* final_state = nullptr);

}  // namespace hvec
