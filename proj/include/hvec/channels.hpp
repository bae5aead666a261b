#pragma once

#include <array>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hvec/codes.hpp"
#include "hvec/pauli.hpp"
#include "hvec/rng.hpp"

namespace hvec {

enum class PauliAxis { X, Y, Z };

// Probability distribution p_{x,z} over Pauli error pairs X^x Z^z. Stored
// factorized (per-qubit distributions over I/X/Y/Z) whenever built from
// per-qubit noise; explicit term lists otherwise.
class PauliChannel {
 public:
  struct Term {
    uint64_t x = 0;
    uint64_t z = 0;
    double p = 0.0;
  };

  // Per-qubit probabilities indexed as [I, X, Y, Z].
  using SiteDist = std::array<double, 4>;

  static PauliChannel from_sites(std::vector<SiteDist> sites);
  static PauliChannel from_terms(int n, std::vector<Term> terms);

  // Each qubit: I with 1-p, X/Y/Z with p/3 each.
  static PauliChannel depolarizing_product(int n, double p);
  // Each qubit: I with 1-p_y, Y with p_y.
  static PauliChannel biased_check_channel(int n, double p_y);
  static PauliChannel identity(int n);

  int n() const { return n_; }
  bool factorized() const { return factorized_; }

  // Probability of the exact term (x, z); zero when absent.
  double term_prob(const BitVec& x, const BitVec& z) const;

  // Explicit terms with nonzero probability, sorted by (x, z). Capacity
  // error when 4^n would exceed the materialization bound.
  std::vector<Term> terms() const;

  // Total probability of errors whose every non-identity site is sigma
  // (the identity term counts). Equals (1-2p/3)^n for depolarizing, sigma=Y.
  double prob_pure_sigma(PauliAxis sigma) const;

  std::pair<BitVec, BitVec> sample(CounterRng& rng) const;

  double total_probability() const;

  const std::vector<SiteDist>& sites() const;

  // Per-site relabeling of the X/Y/Z probabilities (factorized channels).
  // perm maps old axis -> new axis.
  PauliChannel relabeled(PauliAxis x_to, PauliAxis y_to, PauliAxis z_to) const;

 private:
  PauliChannel() = default;

  int n_ = 0;
  bool factorized_ = false;
  std::vector<SiteDist> sites_;
  std::vector<Term> terms_;                       // sorted by (x, z)
  std::unordered_map<uint64_t, double> lookup_;   // key packs (x, z)
  std::vector<double> cdf_;                       // sampling (explicit form)
};

// Hoeffding-style sampling overhead of a post-processed estimator with
// normalisation P: C = P^-2.
double sampling_overhead(double P);

// Renormalized channel restricted to x, z in the coset-leader set, plus the
// probability mass dropped.
std::pair<PauliChannel, double> restrict_to_correctable(const PauliChannel& ch,
                                                        const ClassicalCode& code);

// Werner-state parameter: Bell pair with single-qubit depolarizing noise of
// strength p on one branch; fidelity 1 - p with the ideal pair.
struct WernerParam {
  double p;

  explicit WernerParam(double p_) : p(p_) {
    if (p < 0.0 || p > 0.75) throw DomainError("Werner parameter must be in [0, 0.75]");
  }
};

}  // namespace hvec
