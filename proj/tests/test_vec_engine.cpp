#include "hvec/vec_engine.hpp"

#include <cmath>

#include "dense_reference.hpp"
#include "doctest.h"
#include "hvec/closed_forms.hpp"

using namespace hvec;

namespace {

// Dense-matrix oracle for Tr(P rho) on the two logical input states.
Eigen::MatrixXcd dense_state(const ClassicalCode& code, LogicalState st) {
  int64_t dim = int64_t{1} << code.n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  if (st == LogicalState::ZeroL) {
    rho(0, 0) = 1.0;
  } else {
    double amp = 1.0 / static_cast<double>(code.logicals.size());
    for (const auto& a : code.logicals)
      for (const auto& b : code.logicals)
        rho(static_cast<int64_t>(a.word()), static_cast<int64_t>(b.word())) = amp;
  }
  return rho;
}

}  // namespace

TEST_CASE("stabilizer trace matches the dense oracle") {
  for (int d : {3, 5}) {
    ClassicalCode code = repetition(d);
    for (LogicalState st : {LogicalState::ZeroL, LogicalState::PlusL}) {
      InputLogicalState in{&code, st};
      StabilizerTrace tr(in);
      auto rho = dense_state(code, st);
      CounterRng rng(3, d);
      for (int trial = 0; trial < 40; ++trial) {
        PauliOp p(BitVec(d, rng.next_u64()), BitVec(d, rng.next_u64()),
                  static_cast<int>(rng.next_below(4)));
        std::complex<double> want = (hvec_test::dense_pauli(p) * rho).trace();
        CHECK(std::abs(tr.trace(p) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("kept_component_weight") {
  ClassicalCode code = repetition(3);
  auto ch = PauliChannel::depolarizing_product(3, 0.3);
  BitVec zero = BitVec::zeros(3), ones = BitVec::ones(3);

  // u=v=0 -> p_{k,k}, the pure-Y weight of the leader.
  BitVec k = BitVec::from_string("100");
  CHECK(kept_component_weight(code, ch, k, zero, zero) ==
        doctest::Approx(0.49 * 0.1).epsilon(1e-12));
  // k=0, u=v=1...1 -> p_{111,111} = (p/3)^3.
  CHECK(kept_component_weight(code, ch, BitVec::zeros(3), ones, ones) ==
        doctest::Approx(0.001).epsilon(1e-12));
  // Terms outside the channel support vanish (restricted channel).
  auto [restricted, leak] = restrict_to_correctable(ch, code);
  (void)leak;
  CHECK(kept_component_weight(code, restricted, BitVec::zeros(3), ones, ones) == 0.0);
  CHECK_THROWS_AS(
      kept_component_weight(code, ch, k, BitVec::from_string("110"), zero), DomainError);
}

TEST_CASE("compute_p_cor") {
  ClassicalCode code = repetition(3);
  SUBCASE("d=3 depolarizing p=0.1 gives 0.810") {
    auto ch = PauliChannel::depolarizing_product(3, 0.1);
    CHECK(compute_p_cor(code, ch) == doctest::Approx(0.810).epsilon(1e-12));
    // Cross-check against explicit enumeration over leaders.
    double sum = 0.0;
    for (const auto& k : code.leaders()) sum += ch.term_prob(k, k);
    CHECK(compute_p_cor(code, ch) == doctest::Approx(sum).epsilon(1e-14));
  }
  SUBCASE("p=0 gives 1; d=1 gives 1-p") {
    CHECK(compute_p_cor(code, PauliChannel::depolarizing_product(3, 0.0)) ==
          doctest::Approx(1.0));
    CHECK(compute_p_cor(repetition(1), PauliChannel::depolarizing_product(1, 0.3)) ==
          doctest::Approx(0.7).epsilon(1e-12));
  }
}

TEST_CASE("compute_p_max") {
  SUBCASE("d=3, p=0.3: 0.512 + 0.008, checked against the explicit double sum") {
    ClassicalCode code = repetition(3);
    auto ch = PauliChannel::depolarizing_product(3, 0.3);
    double got = compute_p_max(code, ch);
    CHECK(got == doctest::Approx(0.520).epsilon(1e-12));
    double oracle = 0.0;
    for (const auto& v : code.logicals)
      for (uint64_t x = 0; x < 8; ++x)
        oracle += ch.term_prob(BitVec(3, x), BitVec(3, x) ^ v);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-14));
  }
  SUBCASE("p=0 gives 1; d=1 gives 1 for any p") {
    CHECK(compute_p_max(repetition(3), PauliChannel::depolarizing_product(3, 0.0)) ==
          doctest::Approx(1.0));
    CHECK(compute_p_max(repetition(1), PauliChannel::depolarizing_product(1, 0.4)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("p_full properties") {
  SUBCASE("noiseless channel gives P_full = 1") {
    for (LogicalState st : {LogicalState::ZeroL, LogicalState::PlusL})
      CHECK(compute_p_full(repetition(3), PauliChannel::identity(3), st) ==
            doctest::Approx(1.0));
  }

  SUBCASE("restriction to the correctable set makes P_full = P_cor") {
    ClassicalCode code = repetition(3);
    auto [ch, leak] =
        restrict_to_correctable(PauliChannel::depolarizing_product(3, 0.2), code);
    (void)leak;
    CHECK(compute_p_full(code, ch, LogicalState::ZeroL) ==
          doctest::Approx(compute_p_cor(code, ch)).epsilon(1e-14));
  }

  SUBCASE("P_full <= P_max across a grid") {
    for (int d : {1, 3, 5, 7}) {
      ClassicalCode code = repetition(d);
      for (double p : {0.01, 0.1, 0.3}) {
        auto ch = PauliChannel::depolarizing_product(d, p);
        VecAnalysis a = analyze(code, ch, LogicalState::ZeroL);
        CHECK(a.p_full <= a.p_max + 1e-12);
        CHECK(a.p_cor <= a.p_max + 1e-12);
      }
    }
  }
}

TEST_CASE("logical error bound") {
  ClassicalCode code = repetition(3);
  SUBCASE("noiseless bound is zero") {
    VecAnalysis a = analyze(code, PauliChannel::identity(3), LogicalState::ZeroL);
    auto b = logical_error_bound(a);
    CHECK(b.vs_pmax == doctest::Approx(0.0));
    CHECK(b.vs_pcor == doctest::Approx(0.0));
  }

  SUBCASE("d=3 p=0.1 exact bound sits above the leading-order rate by ~11%") {
    // The leading-order rate drops the (2p/3)^d kept-logical mass and the
    // weight > (d+1)/2 pure-Y terms, which is a 2p-level effect at d=3.
    auto ch = PauliChannel::depolarizing_product(3, 0.1);
    auto b = logical_error_bound(analyze(code, ch, LogicalState::ZeroL));
    double lead = eval(FormulaId::Vec, 3, 0.1);
    CHECK(b.vs_pmax == doctest::Approx(0.0040984).epsilon(1e-4));
    CHECK(b.vs_pmax / lead == doctest::Approx(1.1107).epsilon(1e-3));
  }

  SUBCASE("bound is monotone nonincreasing in d at fixed p = 0.1") {
    double prev = 1.0;
    for (int d : {1, 3, 5, 7}) {
      auto ch = PauliChannel::depolarizing_product(d, 0.1);
      auto b = logical_error_bound(analyze(repetition(d), ch, LogicalState::ZeroL));
      CHECK(b.vs_pmax <= prev + 1e-15);
      prev = b.vs_pmax;
    }
  }

  SUBCASE("zero p_cor is rejected") {
    VecAnalysis a;
    a.p_cor = 0.0;
    CHECK_THROWS_AS(logical_error_bound(a), DomainError);
  }
}

TEST_CASE("analysis overhead uses p_cor") {
  ClassicalCode code = repetition(3);
  auto ch = PauliChannel::depolarizing_product(3, 0.1);
  VecAnalysis a = analyze(code, ch, LogicalState::ZeroL);
  CHECK(a.overhead == doctest::Approx(1.0 / (0.81 * 0.81)).epsilon(1e-12));
}

TEST_CASE("check_transformation") {
  SUBCASE("transversal H on X^i, Z^j holds with beta = (-1)^{i.j}") {
    CounterRng rng(9, 0);
    for (int t = 0; t < 40; ++t) {
      BitVec i(6, rng.next_u64()), j(6, rng.next_u64());
      auto r = check_transformation(TransformKind::TransversalH, PauliOp::x_type(i),
                                    PauliOp::z_type(j));
      REQUIRE(r.holds);
      double want = i.dot(j) ? -1.0 : 1.0;
      CHECK(std::abs(r.beta - std::complex<double>(want, 0)) < 1e-12);
    }
  }

  SUBCASE("transversal sqrt-Y on 1-qubit X, I holds") {
    auto r = check_transformation(TransformKind::TransversalSqrtY, parse_pauli("X"),
                                  parse_pauli("I"));
    CHECK(r.holds);
    CHECK(std::abs(r.beta - std::complex<double>(1, 0)) < 1e-12);
  }

  SUBCASE("transversal sqrt-Y beta carries the (-1)^{|j|} factor") {
    CounterRng rng(10, 0);
    for (int t = 0; t < 40; ++t) {
      BitVec i(5, rng.next_u64()), j(5, rng.next_u64());
      auto r = check_transformation(TransformKind::TransversalSqrtY, PauliOp::x_type(i),
                                    PauliOp::z_type(j));
      REQUIRE(r.holds);
      double want = ((j.weight() + (i.dot(j) ? 1 : 0)) % 2) ? -1.0 : 1.0;
      CHECK(std::abs(r.beta - std::complex<double>(want, 0)) < 1e-12);
    }
  }

  SUBCASE("swap on disjoint-half supports holds with beta = 1") {
    auto e = parse_pauli("XI"), ff = parse_pauli("IZ");
    auto r = check_transformation(TransformKind::Swap, e, ff);
    CHECK(r.holds);
    CHECK(std::abs(r.beta - std::complex<double>(1, 0)) < 1e-12);
  }

  SUBCASE("holds = false is a valid outcome") {
    // E with a Z component is not an X-indexed error.
    auto r = check_transformation(TransformKind::TransversalH, parse_pauli("Y"),
                                  parse_pauli("Z"));
    CHECK_FALSE(r.holds);
  }
}
