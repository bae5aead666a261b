#include "hvec/channels.hpp"

#include <algorithm>
#include <cmath>

namespace hvec {

namespace {

constexpr double kNormTol = 1e-12;
constexpr int kMaterializeMaxQubits = 8;

// Site index from (x, z) bits: 0=I, 1=X, 2=Z, 3=Y.
inline int site_code(bool xb, bool zb) { return static_cast<int>(xb) | (static_cast<int>(zb) << 1); }

// SiteDist is ordered [I, X, Y, Z]; map the packed code onto it.
inline int dist_index(int code) {
  static constexpr int kMap[4] = {0, 1, 3, 2};
  return kMap[code];
}

// Exact key; explicit channels are limited to n <= 32 so both parts fit.
inline uint64_t pack_key(uint64_t x, uint64_t z) { return (x << 32) | z; }

int axis_index(PauliAxis a) {
  switch (a) {
    case PauliAxis::X:
      return 1;
    case PauliAxis::Y:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

PauliChannel PauliChannel::from_sites(std::vector<SiteDist> sites) {
  PauliChannel ch;
  ch.n_ = static_cast<int>(sites.size());
  if (ch.n_ < 1 || ch.n_ > 64) throw DomainError("channel qubit count must be in [1, 64]");
  for (const auto& s : sites) {
    double sum = 0.0;
    for (double v : s) {
      if (v < -kNormTol) throw DomainError("site probabilities must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kNormTol)
      throw DomainError("site probabilities must sum to 1");
  }
  ch.factorized_ = true;
  ch.sites_ = std::move(sites);
  return ch;
}

PauliChannel PauliChannel::from_terms(int n, std::vector<Term> terms) {
  PauliChannel ch;
  ch.n_ = n;
  if (n < 1 || n > 32) throw DomainError("explicit channels support at most 32 qubits");
  double sum = 0.0;
  for (const auto& t : terms) {
    if (t.p < -kNormTol) throw DomainError("term probabilities must be nonnegative");
    sum += t.p;
  }
  if (std::abs(sum - 1.0) > kNormTol) throw DomainError("channel must sum to 1 (tol 1e-12)");
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return a.x != b.x ? a.x < b.x : a.z < b.z;
  });
  ch.terms_ = std::move(terms);
  double acc = 0.0;
  for (const auto& t : ch.terms_) {
    ch.lookup_[pack_key(t.x, t.z)] += t.p;
    acc += t.p;
    ch.cdf_.push_back(acc);
  }
  return ch;
}

PauliChannel PauliChannel::depolarizing_product(int n, double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("depolarizing strength must be in [0, 1]");
  std::vector<SiteDist> sites(static_cast<size_t>(n), SiteDist{1.0 - p, p / 3, p / 3, p / 3});
  return from_sites(std::move(sites));
}

PauliChannel PauliChannel::biased_check_channel(int n, double p_y) {
  if (p_y < 0.0 || p_y > 1.0) throw DomainError("Y-bias strength must be in [0, 1]");
  std::vector<SiteDist> sites(static_cast<size_t>(n), SiteDist{1.0 - p_y, 0.0, p_y, 0.0});
  return from_sites(std::move(sites));
}

PauliChannel PauliChannel::identity(int n) { return depolarizing_product(n, 0.0); }

double PauliChannel::term_prob(const BitVec& x, const BitVec& z) const {
  if (x.size() != n_ || z.size() != n_) throw DimensionError("term_prob: length mismatch");
  if (factorized_) {
    double p = 1.0;
    for (int i = 0; i < n_ && p != 0.0; ++i)
      p *= sites_[static_cast<size_t>(i)][static_cast<size_t>(
          dist_index(site_code(x.get(i), z.get(i))))];
    return p;
  }
  auto it = lookup_.find(pack_key(x.word(), z.word()));
  return it == lookup_.end() ? 0.0 : it->second;
}

std::vector<PauliChannel::Term> PauliChannel::terms() const {
  if (!factorized_) return terms_;
  if (n_ > kMaterializeMaxQubits)
    throw CapacityError("explicit materialization supports n <= 8");
  std::vector<Term> out;
  out.reserve(size_t{1} << (2 * n_));
  for (uint64_t x = 0; x < (uint64_t{1} << n_); ++x) {
    for (uint64_t z = 0; z < (uint64_t{1} << n_); ++z) {
      double p = term_prob(BitVec(n_, x), BitVec(n_, z));
      if (p > 0.0) out.push_back(Term{x, z, p});
    }
  }
  return out;
}

double PauliChannel::prob_pure_sigma(PauliAxis sigma) const {
  int idx = axis_index(sigma);
  if (factorized_) {
    double p = 1.0;
    for (const auto& s : sites_) p *= s[0] + s[static_cast<size_t>(idx)];
    return p;
  }
  bool want_x = sigma != PauliAxis::Z;
  bool want_z = sigma != PauliAxis::X;
  double total = 0.0;
  for (const auto& t : terms_) {
    uint64_t support = t.x | t.z;
    bool pure = (t.x == (want_x ? support : 0)) && (t.z == (want_z ? support : 0));
    if (pure) total += t.p;
  }
  return total;
}

std::pair<BitVec, BitVec> PauliChannel::sample(CounterRng& rng) const {
  BitVec x(n_), z(n_);
  if (factorized_) {
    for (int i = 0; i < n_; ++i) {
      const auto& s = sites_[static_cast<size_t>(i)];
      double u = rng.next_double();
      if (u < s[0]) continue;
      u -= s[0];
      if (u < s[1]) {
        x.set(i, true);
      } else if (u < s[1] + s[2]) {
        x.set(i, true);
        z.set(i, true);
      } else {
        z.set(i, true);
      }
    }
    return {x, z};
  }
  double u = rng.next_double() * cdf_.back();
  size_t idx = static_cast<size_t>(
      std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  if (idx >= terms_.size()) idx = terms_.size() - 1;
  return {BitVec(n_, terms_[idx].x), BitVec(n_, terms_[idx].z)};
}

double PauliChannel::total_probability() const {
  if (factorized_) {
    double p = 1.0;
    for (const auto& s : sites_) p *= s[0] + s[1] + s[2] + s[3];
    return p;
  }
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.p;
  return sum;
}

const std::vector<PauliChannel::SiteDist>& PauliChannel::sites() const {
  if (!factorized_) throw DomainError("sites() requires a factorized channel");
  return sites_;
}

PauliChannel PauliChannel::relabeled(PauliAxis x_to, PauliAxis y_to, PauliAxis z_to) const {
  if (!factorized_) throw DomainError("relabeled() requires a factorized channel");
  std::vector<SiteDist> out(sites_.size());
  for (size_t i = 0; i < sites_.size(); ++i) {
    out[i][0] = sites_[i][0];
    out[i][static_cast<size_t>(axis_index(x_to))] = sites_[i][1];
    out[i][static_cast<size_t>(axis_index(y_to))] = sites_[i][2];
    out[i][static_cast<size_t>(axis_index(z_to))] = sites_[i][3];
  }
  return from_sites(std::move(out));
}

double sampling_overhead(double P) {
  if (P <= 0.0) throw DomainError("sampling overhead requires P > 0");
  return 1.0 / (P * P);
}

std::pair<PauliChannel, double> restrict_to_correctable(const PauliChannel& ch,
                                                        const ClassicalCode& code) {
  if (ch.n() != code.n) throw DimensionError("restrict_to_correctable: qubit count mismatch");
  auto leaders = code.leaders();
  if (leaders.size() * leaders.size() > (size_t{1} << 20))
    throw CapacityError("correctable restriction supports |leaders|^2 <= 2^20");

  std::vector<PauliChannel::Term> kept;
  double kept_mass = 0.0;
  for (const auto& lx : leaders) {
    for (const auto& lz : leaders) {
      double p = ch.term_prob(lx, lz);
      if (p > 0.0) {
        kept.push_back(PauliChannel::Term{lx.word(), lz.word(), p});
        kept_mass += p;
      }
    }
  }
  if (kept_mass <= 0.0)
    throw DomainError("restrict_to_correctable: no probability mass on the correctable set");
  for (auto& t : kept) t.p /= kept_mass;
  return {PauliChannel::from_terms(ch.n(), std::move(kept)), 1.0 - kept_mass};
}

}  // namespace hvec
