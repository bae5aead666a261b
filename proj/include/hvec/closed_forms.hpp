#pragma once

#include <cstdint>

namespace hvec {

// Closed-form expressions behind the theory curves. RepX/Sur/Vec are the
// leading-order logical error rates of the repetition, unrotated surface and
// virtual quantum repetition codes under local depolarizing noise; RepZ is
// exact. PY/CY are the pure-Y probability and sampling overhead. FH, FSqrtY
// and FSymH are the noisy-check 2-to-1 virtual-EPP fidelities. PCorClosed /
// PMaxClosed are the correctable-mass and kept-mass closed forms.
enum class FormulaId {
  RepX,
  RepZ,
  Sur,
  Vec,
  PY,
  CY,
  FH,
  FSqrtY,
  FSymH,
  PCorClosed,
  PMaxClosed,
};

// Exact integer binomial coefficient.
uint64_t binomial(int n, int k);

// Evaluates the cited expression with no further approximation. d must be
// odd where it enters; the EPP fidelities ignore d and require p <= 0.75.
double eval(FormulaId id, int d, double p);

struct ImprovementRatios {
  double rep_over_vec = 0.0;
  double sur_over_vec = 0.0;
};

// RepX/Vec and Sur/Vec; at p = 0 the analytic limits 2^{(d+1)/2} and
// (5d-4) 2^{(d+1)/2} are returned instead of 0/0.
ImprovementRatios improvement_ratios(int d, double p);

}  // namespace hvec
