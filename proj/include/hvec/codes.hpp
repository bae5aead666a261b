#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hvec/bitvec.hpp"

namespace hvec {

struct Syndrome {
  BitVec bits;

  bool operator==(const Syndrome& o) const { return bits == o.bits; }
};

// A classical bit-flip code given by Z-type parity checks. The correctable
// set is the coset-leader table: one minimum-weight representative per
// syndrome, ties broken by smallest packed word, which makes the code
// non-degenerate by construction.
struct ClassicalCode {
  int n = 0;
  std::vector<BitVec> checks;      // supports of the Z stabilisers
  std::vector<BitVec> logicals;    // codeword supports (X logicals), incl. zero
  std::unordered_map<uint64_t, BitVec> coset_leaders;  // keyed by syndrome word
  int rank = 0;

  int num_logical_bits() const { return n - rank; }
  bool is_logical(const BitVec& v) const;

  Syndrome syndrome(const BitVec& x) const;
  BitVec decode(const Syndrome& s) const;
  // Coset leaders in deterministic (weight, word) order.
  std::vector<BitVec> leaders() const;
};

// Distance-d repetition code: checks Z_i Z_{i+1}, logicals {0...0, 1...1},
// coset leaders = all vectors of weight <= (d-1)/2 (majority vote).
ClassicalCode repetition(int d);

// General code from parity-check rows. Rows linearly dependent on earlier
// rows are dropped. Capacity: n <= 24 (coset sweep), n - rank <= 16
// (logical enumeration).
ClassicalCode from_parity_checks(int n, const std::vector<BitVec>& rows);

// Knill-Laflamme condition over the coset-leader set: x ^ v logical implies
// x = v for all leader pairs.
bool check_kl_classical(const ClassicalCode& code);

// Projection selector for arbitrary error pairs: Pi X^u X^v Pi is X^{u^v} Pi
// when u^v is a codeword and vanishes otherwise.
struct KlClass {
  bool is_logical = false;
  BitVec logical;  // u ^ v when is_logical
};
KlClass generalized_kl_class(const ClassicalCode& code, const BitVec& u, const BitVec& v);

// Code-definition text format: first line "n <n>", then one check per line
// as a 0/1 string.
ClassicalCode load_code_definition(std::istream& in);
ClassicalCode load_code_definition_file(const std::string& path);

}  // namespace hvec
