#include "hvec/codes.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>

namespace hvec {

namespace {

// Incremental GF(2) basis keyed by highest set bit. insert() reports whether
// the row was independent of everything seen so far.
struct Gf2Basis {
  uint64_t pivot[64] = {};

  bool insert(uint64_t v) {
    while (v) {
      int h = 63 - std::countl_zero(v);
      if (!pivot[h]) {
        pivot[h] = v;
        return true;
      }
      v ^= pivot[h];
    }
    return false;
  }
};

std::vector<BitVec> null_space(int n, const std::vector<BitVec>& checks) {
  // Gaussian elimination with explicit pivot columns, then free-variable
  // enumeration.
  std::vector<uint64_t> rows;
  rows.reserve(checks.size());
  for (const auto& c : checks) rows.push_back(c.word());

  std::vector<int> pivot_col;
  std::vector<uint64_t> reduced;
  for (uint64_t r : rows) {
    uint64_t v = r;
    for (size_t i = 0; i < reduced.size(); ++i)
      if ((v >> pivot_col[i]) & 1u) v ^= reduced[i];
    if (v == 0) continue;
    int col = std::countr_zero(v);
    // Back-substitute to keep each pivot column unique.
    for (size_t i = 0; i < reduced.size(); ++i)
      if ((reduced[i] >> col) & 1u) reduced[i] ^= v;
    reduced.push_back(v);
    pivot_col.push_back(col);
  }

  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);

  int k = static_cast<int>(free_cols.size());
  if (k > 16) throw CapacityError("codeword enumeration supports at most 2^16 logicals");

  // Basis vector per free column.
  std::vector<uint64_t> basis_vecs;
  for (int fc : free_cols) {
    uint64_t v = uint64_t{1} << fc;
    for (size_t i = 0; i < reduced.size(); ++i)
      if ((reduced[i] >> fc) & 1u) v |= uint64_t{1} << pivot_col[i];
    basis_vecs.push_back(v);
  }

  std::vector<BitVec> out;
  out.reserve(size_t{1} << k);
  for (uint64_t m = 0; m < (uint64_t{1} << k); ++m) {
    uint64_t v = 0;
    for (int b = 0; b < k; ++b)
      if ((m >> b) & 1u) v ^= basis_vecs[static_cast<size_t>(b)];
    out.emplace_back(n, v);
  }
  std::sort(out.begin(), out.end(),
            [](const BitVec& a, const BitVec& b) { return a.word() < b.word(); });
  return out;
}

uint64_t syndrome_word(const std::vector<BitVec>& checks, const BitVec& x) {
  uint64_t s = 0;
  for (size_t j = 0; j < checks.size(); ++j)
    if (checks[j].dot(x)) s |= uint64_t{1} << j;
  return s;
}

}  // namespace

bool ClassicalCode::is_logical(const BitVec& v) const {
  for (const auto& l : logicals)
    if (l == v) return true;
  return false;
}

Syndrome ClassicalCode::syndrome(const BitVec& x) const {
  if (x.size() != n) throw DimensionError("syndrome: error vector length mismatch");
  BitVec s(static_cast<int>(checks.size()), syndrome_word(checks, x));
  return Syndrome{s};
}

BitVec ClassicalCode::decode(const Syndrome& s) const {
  if (s.bits.size() != static_cast<int>(checks.size()))
    throw DimensionError("decode: syndrome length mismatch");
  auto it = coset_leaders.find(s.bits.word());
  if (it == coset_leaders.end()) throw DomainError("decode: unreachable syndrome");
  return it->second;
}

std::vector<BitVec> ClassicalCode::leaders() const {
  std::vector<BitVec> out;
  out.reserve(coset_leaders.size());
  for (const auto& [sw, leader] : coset_leaders) out.push_back(leader);
  std::sort(out.begin(), out.end(),
            [](const BitVec& a, const BitVec& b) { return a.weight_less(b); });
  return out;
}

ClassicalCode repetition(int d) {
  if (d < 1 || d % 2 == 0) throw DomainError("repetition code distance must be odd and >= 1");
  if (d > 25) throw CapacityError("repetition leader table supports d <= 25");
  ClassicalCode code;
  code.n = d;
  for (int i = 0; i + 1 < d; ++i) {
    BitVec c(d);
    c.set(i, true);
    c.set(i + 1, true);
    code.checks.push_back(c);
  }
  code.rank = d - 1;
  code.logicals = {BitVec::zeros(d), BitVec::ones(d)};

  // Every weight <= (d-1)/2 vector is the unique minimum-weight member of
  // its coset.
  int t = (d - 1) / 2;
  for (uint64_t w = 0; w < (uint64_t{1} << d); ++w) {
    BitVec e(d, w);
    if (e.weight() > t) continue;
    code.coset_leaders.emplace(syndrome_word(code.checks, e), e);
  }
  return code;
}

ClassicalCode from_parity_checks(int n, const std::vector<BitVec>& rows) {
  if (rows.empty()) throw DomainError("from_parity_checks: rows must be nonempty");
  if (n > 24) throw CapacityError("coset enumeration supports n <= 24");
  for (const auto& r : rows)
    if (r.size() != n) throw DimensionError("from_parity_checks: row length mismatch");

  ClassicalCode code;
  code.n = n;
  // Keep rows as given, dropping ones dependent on earlier rows.
  Gf2Basis basis;
  for (const auto& r : rows)
    if (basis.insert(r.word())) code.checks.push_back(r);
  code.rank = static_cast<int>(code.checks.size());
  code.logicals = null_space(n, code.checks);

  // Exhaustive sweep keeping, per syndrome, the minimum-weight vector with
  // the smallest packed word.
  for (uint64_t w = 0; w < (uint64_t{1} << n); ++w) {
    BitVec e(n, w);
    uint64_t s = syndrome_word(code.checks, e);
    auto it = code.coset_leaders.find(s);
    if (it == code.coset_leaders.end())
      code.coset_leaders.emplace(s, e);
    else if (e.weight_less(it->second))
      it->second = e;
  }
  return code;
}

bool check_kl_classical(const ClassicalCode& code) {
  auto ls = code.leaders();
  for (size_t i = 0; i < ls.size(); ++i)
    for (size_t j = i + 1; j < ls.size(); ++j)
      if (code.is_logical(ls[i] ^ ls[j])) return false;
  return true;
}

KlClass generalized_kl_class(const ClassicalCode& code, const BitVec& u, const BitVec& v) {
  BitVec w = u ^ v;
  if (code.is_logical(w)) return KlClass{true, w};
  return KlClass{false, BitVec::zeros(code.n)};
}

ClassicalCode load_code_definition(std::istream& in) {
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n")
    throw DomainError("code definition must start with 'n <count>'");
  std::vector<BitVec> rows;
  std::string line;
  while (in >> line) {
    if (static_cast<int>(line.size()) != n)
      throw DomainError("check row length differs from the declared n");
    rows.push_back(BitVec::from_string(line));
  }
  return from_parity_checks(n, rows);
}

ClassicalCode load_code_definition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open code definition file: " + path);
  return load_code_definition(in);
}

}  // namespace hvec
