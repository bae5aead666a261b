#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "hvec/errors.hpp"

namespace hvec {

// Fixed-length binary vector packed into a single machine word.
// Bit i is qubit i (LSB first). Length is capped at 64, which covers every
// experiment in this artifact (n <= 14).
class BitVec {
 public:
  BitVec() = default;

  explicit BitVec(int n, uint64_t bits = 0) : n_(n), bits_(bits) {
    if (n < 0 || n > 64) throw DomainError("BitVec length must be in [0, 64]");
    bits_ &= mask();
  }

  static BitVec zeros(int n) { return BitVec(n, 0); }
  static BitVec ones(int n) { return BitVec(n, ~uint64_t{0}); }
  static BitVec unit(int n, int i) {
    BitVec v(n);
    v.set(i, true);
    return v;
  }
  // Parses "0101..." with bit 0 first.
  static BitVec from_string(const std::string& s) {
    BitVec v(static_cast<int>(s.size()));
    for (int i = 0; i < v.n_; ++i) {
      if (s[i] == '1')
        v.set(i, true);
      else if (s[i] != '0')
        throw DomainError("BitVec string must contain only 0/1");
    }
    return v;
  }

  int size() const { return n_; }
  uint64_t word() const { return bits_; }
  bool get(int i) const {
    check_index(i);
    return (bits_ >> i) & 1u;
  }
  void set(int i, bool b) {
    check_index(i);
    if (b)
      bits_ |= uint64_t{1} << i;
    else
      bits_ &= ~(uint64_t{1} << i);
  }

  BitVec operator^(const BitVec& o) const { return binary(o, bits_ ^ o.bits_); }
  BitVec operator&(const BitVec& o) const { return binary(o, bits_ & o.bits_); }
  BitVec operator|(const BitVec& o) const { return binary(o, bits_ | o.bits_); }
  BitVec operator~() const { return BitVec(n_, ~bits_); }

  // Binary dot product mod 2.
  bool dot(const BitVec& o) const {
    check_length(o);
    return std::popcount(bits_ & o.bits_) & 1;
  }
  int weight() const { return std::popcount(bits_); }
  bool is_zero() const { return bits_ == 0; }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }
  // Orders by weight, ties broken lexicographically reading bit 0 first
  // (the vector with 0 at the first differing position is smaller). The
  // deterministic tie-break used wherever a minimum-weight representative
  // is chosen.
  bool weight_less(const BitVec& o) const {
    int wa = weight(), wb = o.weight();
    if (wa != wb) return wa < wb;
    uint64_t diff = bits_ ^ o.bits_;
    if (diff == 0) return false;
    return !get(std::countr_zero(diff));
  }

  std::string str() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  uint64_t mask() const { return n_ == 64 ? ~uint64_t{0} : (uint64_t{1} << n_) - 1; }
  void check_index(int i) const {
    if (i < 0 || i >= n_) throw DomainError("BitVec index out of range");
  }
  void check_length(const BitVec& o) const {
    if (n_ != o.n_) throw DimensionError("BitVec length mismatch");
  }
  BitVec binary(const BitVec& o, uint64_t bits) const {
    check_length(o);
    return BitVec(n_, bits);
  }

  int n_ = 0;
  uint64_t bits_ = 0;
};

}  // namespace hvec
