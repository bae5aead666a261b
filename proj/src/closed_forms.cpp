#include "hvec/closed_forms.hpp"

#include <cmath>

#include "hvec/errors.hpp"

namespace hvec {

uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // 128-bit intermediate: C(63,31)*63 overflows 64 bits mid-product.
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<uint64_t>(r);
}

namespace {

void require_odd(int d) {
  if (d < 1 || d % 2 == 0) throw DomainError("formula requires odd d >= 1");
}

void require_prob(double p, double hi) {
  if (p < 0.0 || p > hi) throw DomainError("formula argument p out of range");
}

double rep_x(int d, double p) {
  double q = 2.0 * p / 3.0;
  return static_cast<double>(binomial(d, (d + 1) / 2)) *
         std::pow(1.0 - q, (d - 1) / 2) * std::pow(q, (d + 1) / 2);
}

double vec_rate(int d, double p) {
  return std::pow(1.0 - 2.0 * p / 3.0, -d) * static_cast<double>(binomial(d, (d + 1) / 2)) *
         std::pow(1.0 - p, (d - 1) / 2) * std::pow(p / 3.0, (d + 1) / 2);
}

double p_cor_closed(int d, double p) {
  double sum = 0.0;
  for (int w = 0; w <= (d - 1) / 2; ++w)
    sum += static_cast<double>(binomial(d, w)) * std::pow(1.0 - p, d - w) * std::pow(p / 3.0, w);
  return sum;
}

}  // namespace

double eval(FormulaId id, int d, double p) {
  switch (id) {
    case FormulaId::RepX:
      require_odd(d);
      require_prob(p, 1.0);
      return rep_x(d, p);
    case FormulaId::RepZ:
      require_odd(d);
      require_prob(p, 1.0);
      return 1.0 - std::pow(1.0 - 2.0 * p / 3.0, d);
    case FormulaId::Sur:
      require_odd(d);
      require_prob(p, 1.0);
      return static_cast<double>(5 * d - 4) * rep_x(d, p);
    case FormulaId::Vec:
      require_odd(d);
      require_prob(p, 1.0);
      return vec_rate(d, p);
    case FormulaId::PY:
      require_odd(d);
      require_prob(p, 1.0);
      return std::pow(1.0 - 2.0 * p / 3.0, d);
    case FormulaId::CY:
      require_odd(d);
      require_prob(p, 1.0);
      return std::pow(1.0 - 2.0 * p / 3.0, -2 * d);
    case FormulaId::FH: {
      require_prob(p, 0.75);
      double a = (1.0 - p) * (1.0 - p);
      return a / (a + (1.0 - p) * p / 3.0 - 2.0 * p * p / 9.0);
    }
    case FormulaId::FSqrtY: {
      require_prob(p, 0.75);
      double a = (1.0 - p) * (1.0 - p);
      return a / (a + (1.0 - p) * p / 3.0 + 2.0 * p * p / 9.0);
    }
    case FormulaId::FSymH: {
      require_prob(p, 0.75);
      double a = (1.0 - p) * (1.0 - p);
      return a / (a + p * p / 9.0);
    }
    case FormulaId::PCorClosed:
      require_odd(d);
      require_prob(p, 1.0);
      return p_cor_closed(d, p);
    case FormulaId::PMaxClosed:
      require_odd(d);
      require_prob(p, 1.0);
      return std::pow(1.0 - 2.0 * p / 3.0, d) + std::pow(2.0 * p / 3.0, d);
  }
  throw DomainError("unknown formula id");
}

ImprovementRatios improvement_ratios(int d, double p) {
  require_odd(d);
  if (d < 3) throw DomainError("improvement ratios require d >= 3");
  ImprovementRatios r;
  if (p == 0.0) {
    r.rep_over_vec = std::pow(2.0, (d + 1) / 2);
    r.sur_over_vec = static_cast<double>(5 * d - 4) * r.rep_over_vec;
    return r;
  }
  double v = eval(FormulaId::Vec, d, p);
  r.rep_over_vec = eval(FormulaId::RepX, d, p) / v;
  r.sur_over_vec = eval(FormulaId::Sur, d, p) / v;
  return r;
}

}  // namespace hvec
