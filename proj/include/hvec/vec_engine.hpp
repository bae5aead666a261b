#pragma once

#include <complex>
#include <unordered_map>

#include "hvec/channels.hpp"
#include "hvec/codes.hpp"
#include "hvec/pauli.hpp"

namespace hvec {

enum class LogicalState { ZeroL, PlusL };

// Logical input register: ZeroL is the all-zero codeword state, PlusL the
// uniform superposition over all codewords.
struct InputLogicalState {
  const ClassicalCode* code;
  LogicalState label;
};

// Symbolic Tr(P rho) for stabilizer input states, via full enumeration of
// the 2^n-element stabilizer group with exact phases. Nonzero only when the
// unsigned part of P appears in the group.
class StabilizerTrace {
 public:
  explicit StabilizerTrace(const InputLogicalState& state);

  std::complex<double> trace(const PauliOp& p) const;

 private:
  int n_;
  std::unordered_map<uint64_t, int> group_;  // (x, z) -> phase_exp
};

// p_{u^k, v^k}: the channel weight surviving projection onto syndrome leader
// k for logical labels u, v.
double kept_component_weight(const ClassicalCode& code, const PauliChannel& ch,
                             const BitVec& k, const BitVec& u, const BitVec& v);

// Sum over leaders x logicals^2 of p_{u^k,v^k} Re[Tr(X^v Z^u O X^u Z^v rho)].
// With O = I this is P_full, the normalisation <X (x) I>.
double compute_virtual_numerator(const ClassicalCode& code, const PauliChannel& ch,
                                 LogicalState state, const PauliOp& obs);

double compute_p_full(const ClassicalCode& code, const PauliChannel& ch, LogicalState state);

// Sum of diagonal pure-Y weights p_{k,k} over coset leaders.
double compute_p_cor(const ClassicalCode& code, const PauliChannel& ch);

// Sum over v in logicals of sum_x p_{x, x^v}; upper bound on P_full.
double compute_p_max(const ClassicalCode& code, const PauliChannel& ch);

struct VecAnalysis {
  double p_cor = 0.0;
  double p_full = 0.0;
  double p_max = 0.0;
  double p_logical_bound = 0.0;  // (p_max - p_cor) / p_max
  double overhead = 0.0;         // p_cor^-2
};

VecAnalysis analyze(const ClassicalCode& code, const PauliChannel& ch, LogicalState state);

// Both normalisations of the rough logical-error bound. The exact bias
// depends on the observable; these are book-keeping bounds, not exact rates.
struct LogicalErrorBound {
  double vs_pmax = 0.0;  // (p_max - p_cor) / p_max
  double vs_pcor = 0.0;  // (p_max - p_cor) / p_cor
};
LogicalErrorBound logical_error_bound(const VecAnalysis& a);

// Probability of observing syndrome s, summed analytically over the channel:
// (1/2)[P(synd(x) = s) + P(synd(z) = s)]. Matches the dense branch trace.
double analytic_syndrome_prob(const ClassicalCode& code, const PauliChannel& ch,
                              const Syndrome& s);

// Transformation-condition checker: does U^dag (E F) U = beta E' F' hold for
// the index swap, with E indexed by its X support and F by its Z support
// (halves swapped for Swap)?
enum class TransformKind { TransversalH, TransversalSqrtY, Swap };

struct TransformCheck {
  bool holds = false;
  std::complex<double> beta = 0.0;
};
TransformCheck check_transformation(TransformKind kind, const PauliOp& e, const PauliOp& f);

}  // namespace hvec
