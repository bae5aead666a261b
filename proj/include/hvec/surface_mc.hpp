#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hvec/errors.hpp"

namespace hvec {

// Unrotated (planar) surface code of odd distance d on the (2d-1) x (2d-1)
// site lattice: data qubits where r+c is even, Z checks at (even r, odd c),
// X checks at (odd r, even c). Logical Z runs down column c=0, logical X
// along row r=0.
struct SurfaceLayout {
  int d = 0;
  int n = 0;  // d^2 + (d-1)^2
  std::vector<std::pair<int, int>> data_qubits;       // (r, c) per qubit index
  std::vector<std::vector<int>> z_checks;             // data-qubit supports
  std::vector<std::vector<int>> x_checks;
  std::vector<int> logical_z;                         // representative supports
  std::vector<int> logical_x;

  // Decoder tables, one per failure basis.
  struct MatchGraph {
    int rows = 0, cols = 0;
    std::vector<std::pair<int, int>> check_coord;  // per check index
    std::vector<std::vector<int>> qubit_checks;    // checks flipped per qubit
    std::vector<uint8_t> on_logical;               // qubit crosses the logical
  };
  MatchGraph z_graph;  // Z-check graph, decodes bit-flip (X) components
  MatchGraph x_graph;  // X-check graph, decodes phase-flip (Z) components
};

SurfaceLayout build_layout(int d);

enum class Basis { X, Z };

struct DecodeOutcome {
  int weight = 0;          // total matching cost
  bool crosses = false;    // correction crosses the logical representative
  bool approximate = false;  // greedy fallback was used
};

// Minimum-weight matching of the defect set: exact bitmask DP for up to 14
// defects (boundary option first, then pairs in index order on cost ties),
// greedy nearest-boundary beyond that.
DecodeOutcome decode_defects(const SurfaceLayout::MatchGraph& g, int d,
                             const std::vector<int>& defects);

// Explicit correction pattern (data-qubit indices) realizing the same
// matching; used to check syndrome(e ^ c) = 0.
std::vector<int> decode_correction(const SurfaceLayout::MatchGraph& g, int d,
                                   const std::vector<int>& defects);

struct McResult {
  uint64_t shots = 0;
  uint64_t failures = 0;
  double p_hat = 0.0;
  double interval_lo = 0.0;  // factor-1000 likelihood-ratio interval
  double interval_hi = 0.0;
  uint64_t seed = 0;
  uint64_t approx_shots = 0;  // shots decoded with the greedy fallback
};

// Code-capacity Monte Carlo under local depolarizing noise: basis Z counts
// logical bit-flip failures on |0_L>, basis X logical phase-flips on |+_L>.
// Deterministic under (seed) for any thread count.
McResult mc_logical_error(int d, double p, Basis basis, uint64_t shots, uint64_t seed,
                          int threads = 1);

// Exact weighted sum over all depolarizing error patterns up to max_weight,
// decoded through the same matching path; the neglected binomial tail mass
// is returned alongside.
std::pair<double, double> exhaustive_logical_error(int d, double p, int max_weight,
                                                   Basis basis);

// Combinatorial count of weight-(d+1)/2 configurations that produce a
// logical error: (5d-4) C(d, (d+1)/2). Approximate: ties count as half and
// overlapping logical supports are double-counted.
uint64_t a_d_count(int d);

// {q : L(q)/L(p_hat) >= 1/1000} for a binomial likelihood.
std::pair<double, double> likelihood_interval(uint64_t failures, uint64_t shots);

}  // namespace hvec
