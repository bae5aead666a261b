#include "hvec/verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "hvec/closed_forms.hpp"
#include "hvec/dense_sim.hpp"
#include "hvec/detail/dense_reference.hpp"
#include "hvec/surface_mc.hpp"

namespace hvec::verify {

namespace {

struct Harness {
  uint64_t seed;
  std::vector<CheckResult> results;

  void check(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty detail means pass
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
};

std::string fail_if(bool bad, const std::string& msg) { return bad ? msg : std::string(); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

PauliOp random_pauli(int n, CounterRng& rng) {
  return PauliOp(BitVec(n, rng.next_u64()), BitVec(n, rng.next_u64()),
                 static_cast<int>(rng.next_below(4)));
}

PauliOp logical_z_obs(const ClassicalCode& code) {
  return PauliOp::z_type(BitVec::unit(code.n, 0));
}

PauliOp logical_x_obs(const ClassicalCode& code) {
  return PauliOp::x_type(BitVec::ones(code.n));
}

}  // namespace

std::vector<CheckResult> run_all_checks(uint64_t seed) {
  Harness h{seed, {}};

  h.check("pauli.mul_matches_dense_oracle", [&] {
    CounterRng rng(h.seed, 1);
    for (int t = 0; t < 10; ++t) {
      PauliOp a = random_pauli(5, rng), b = random_pauli(5, rng), c = random_pauli(5, rng);
      detail::RefMat lhs = detail::dense_pauli(mul(mul(a, b), c));
      detail::RefMat rhs = detail::dense_pauli(a) * detail::dense_pauli(b) * detail::dense_pauli(c);
      if (detail::max_abs_diff(lhs, rhs) > 1e-12) return std::string("triple product mismatch");
    }
    return std::string();
  });

  h.check("pauli.conjugations_match_dense_oracle", [&] {
    Eigen::MatrixXcd h1(2, 2);
    h1 << 1, 1, 1, -1;
    h1 /= std::sqrt(2.0);
    Eigen::MatrixXcd w(2, 2);
    w << 1, -1, 1, 1;
    w *= std::exp(std::complex<double>(0, M_PI / 4)) / std::sqrt(2.0);
    Eigen::MatrixXcd h5 = Eigen::MatrixXcd::Identity(1, 1), w5 = h5;
    for (int i = 0; i < 5; ++i) {
      h5 = detail::kron(h5, h1);
      w5 = detail::kron(w5, w);
    }
    CounterRng rng(h.seed, 2);
    for (int t = 0; t < 10; ++t) {
      PauliOp p = random_pauli(5, rng);
      if (detail::max_abs_diff(detail::dense_pauli(hadamard_conjugate(p)),
                               h5 * detail::dense_pauli(p) * h5) > 1e-12)
        return std::string("hadamard conjugation mismatch");
      if (detail::max_abs_diff(detail::dense_pauli(sqrt_y_conjugate(p)),
                               w5.adjoint() * detail::dense_pauli(p) * w5) > 1e-12)
        return std::string("sqrt-y conjugation mismatch");
      if (hadamard_conjugate(hadamard_conjugate(p)) != p)
        return std::string("hadamard involution broken");
    }
    return std::string();
  });

  h.check("pauli.transversal_map_preserves_x_xor_z", [&] {
    CounterRng rng(h.seed, 3);
    for (int t = 0; t < 200; ++t) {
      BitVec a(10, rng.next_u64()), x(10, rng.next_u64()), z(10, rng.next_u64());
      auto r = transversal_error_map(a, x, z);
      if ((r.u ^ r.v) != (x ^ z)) return std::string("x^z not preserved");
      auto r2 = transversal_error_map(a, r.u, r.v);
      if (r2.u != x || r2.v != z) return std::string("not an involution");
    }
    return std::string();
  });

  h.check("codes.kl_and_leader_minimality", [&] {
    for (int d : {1, 3, 5, 7}) {
      ClassicalCode code = repetition(d);
      if (!check_kl_classical(code)) return std::string("KL fails for repetition");
      if (code.coset_leaders.size() != (size_t{1} << (d - 1)))
        return std::string("leader count wrong");
      for (const auto& l : code.leaders())
        if (l.weight() > (d - 1) / 2) return std::string("leader above weight bound");
    }
    return std::string();
  });

  h.check("channels.normalization_and_factorized_explicit_agreement", [&] {
    auto ch = PauliChannel::depolarizing_product(3, 0.3);
    double sum = 0.0;
    for (const auto& t : ch.terms()) {
      sum += t.p;
      if (std::abs(t.p - ch.term_prob(BitVec(3, t.x), BitVec(3, t.z))) > 1e-15)
        return std::string("factorized/explicit term mismatch");
    }
    if (std::abs(sum - 1.0) > 1e-12) return std::string("terms do not sum to 1: " + fmt(sum));
    if (ch.terms().size() != 64) return std::string("depolarizing n=3 must have 64 terms");
    return std::string();
  });

  h.check("channels.pure_sigma_closed_form", [&] {
    for (int n : {3, 7, 13}) {
      for (double p : {0.01, 0.1, 0.3}) {
        double got = PauliChannel::depolarizing_product(n, p).prob_pure_sigma(PauliAxis::Y);
        double want = std::pow(1.0 - 2.0 * p / 3.0, n);
        if (std::abs(got - want) > 1e-12) return std::string("P_Y mismatch: " + fmt(got));
      }
    }
    return std::string();
  });

  h.check("channels.sampling_within_5_sigma", [&] {
    auto ch = PauliChannel::depolarizing_product(2, 0.3);
    const uint64_t shots = 1000000;
    std::unordered_map<uint64_t, uint64_t> counts;
    for (uint64_t s = 0; s < shots; ++s) {
      CounterRng rng(h.seed, s);
      auto [x, z] = ch.sample(rng);
      counts[(x.word() << 32) | z.word()]++;
    }
    for (const auto& t : ch.terms()) {
      double expect = t.p * static_cast<double>(shots);
      double sigma = std::sqrt(t.p * (1 - t.p) * static_cast<double>(shots));
      double got = static_cast<double>(counts[(t.x << 32) | t.z]);
      if (std::abs(got - expect) > 5.0 * sigma)
        return std::string("term frequency off by >5 sigma");
    }
    return std::string();
  });

  h.check("vec_engine.p_full_equals_dense_denominator", [&] {
    for (int d : {1, 3, 5}) {
      ClassicalCode code = repetition(d);
      for (double p : {0.01, 0.1, 0.3}) {
        auto ch = PauliChannel::depolarizing_product(d, p);
        for (LogicalState st : {LogicalState::ZeroL, LogicalState::PlusL}) {
          double analytic = compute_p_full(code, ch, st);
          auto est = run_hvec(code, ch, st, logical_z_obs(code),
                              HvecVariant::single_ancilla_h());
          if (std::abs(analytic - est.denominator) > 1e-10)
            return "mismatch at d=" + std::to_string(d) + " p=" + fmt(p) + ": " +
                   fmt(analytic) + " vs " + fmt(est.denominator);
        }
      }
    }
    return std::string();
  });

  h.check("vec_engine.syndrome_probs_match_dense_branches", [&] {
    for (int d : {3, 5}) {
      ClassicalCode code = repetition(d);
      auto ch = PauliChannel::depolarizing_product(d, 0.2);
      auto est = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                          HvecVariant::single_ancilla_h());
      for (const auto& [word, branch] : est.per_syndrome) {
        Syndrome s{BitVec(static_cast<int>(code.checks.size()), word)};
        double want = analytic_syndrome_prob(code, ch, s);
        if (std::abs(want - branch.probability) > 1e-10)
          return std::string("branch probability mismatch: ") + fmt(want) + " vs " +
                 fmt(branch.probability);
      }
    }
    return std::string();
  });

  h.check("hvec.exactness_on_correctable_channels", [&] {
    for (int d : {1, 3, 5}) {
      ClassicalCode code = repetition(d);
      auto [ch, leak] = restrict_to_correctable(
          PauliChannel::depolarizing_product(d, 0.3), code);
      (void)leak;
      auto estZ =
          run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                   HvecVariant::single_ancilla_h());
      auto estX =
          run_hvec(code, ch, LogicalState::PlusL, logical_x_obs(code),
                   HvecVariant::single_ancilla_h());
      if (std::abs(estZ.ratio - 1.0) > 1e-10)
        return "ZeroL ratio " + fmt(estZ.ratio) + " at d=" + std::to_string(d);
      if (std::abs(estX.ratio - 1.0) > 1e-10)
        return "PlusL ratio " + fmt(estX.ratio) + " at d=" + std::to_string(d);
    }
    return std::string();
  });

  h.check("hvec.phase_correction_mutation_breaks_exactness", [&] {
    ClassicalCode code = repetition(3);
    auto [ch, leak] =
        restrict_to_correctable(PauliChannel::depolarizing_product(3, 0.3), code);
    (void)leak;
    // On a correctable-set channel the denominator must equal P_cor; the
    // ratio alone survives the dropped phase (the signs cancel between
    // numerator and denominator), so the check targets the normalisation
    // and the full-channel estimate.
    auto good = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                         HvecVariant::single_ancilla_h());
    if (std::abs(good.denominator - compute_p_cor(code, ch)) > 1e-10)
      return std::string("intact run: denominator differs from P_cor");
    auto mutated = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                            HvecVariant::single_ancilla_h(), /*apply_syndrome_phase=*/false);
    if (std::abs(mutated.denominator - compute_p_cor(code, ch)) < 1e-6)
      return std::string("mutated denominator still matches P_cor");
    auto full = PauliChannel::depolarizing_product(3, 0.3);
    auto full_good = run_hvec(code, full, LogicalState::ZeroL, logical_z_obs(code),
                              HvecVariant::single_ancilla_h());
    auto full_mut = run_hvec(code, full, LogicalState::ZeroL, logical_z_obs(code),
                             HvecVariant::single_ancilla_h(), false);
    return fail_if(std::abs(full_good.ratio - full_mut.ratio) < 1e-6,
                   "full-channel estimate insensitive to the dropped phase");
  });

  h.check("vec_engine.p_max_detects_truncated_logicals", [&] {
    ClassicalCode code = repetition(3);
    auto ch = PauliChannel::depolarizing_product(3, 0.3);
    double closed = eval(FormulaId::PMaxClosed, 3, 0.3);
    if (std::abs(compute_p_max(code, ch) - closed) > 1e-12)
      return std::string("P_max disagrees with closed form on the intact code");
    ClassicalCode mutated = code;
    mutated.logicals = {BitVec::zeros(3)};  // drop the all-ones logical
    return fail_if(std::abs(compute_p_max(mutated, ch) - closed) < 1e-12,
                   "P_max check failed to notice truncated logical set");
  });

  h.check("hvec.multi_ancilla_equivalence", [&] {
    for (int d : {3, 5}) {
      ClassicalCode code = repetition(d);
      for (double p : {0.1, 0.3}) {
        auto ch = PauliChannel::depolarizing_product(d, p);
        auto [dn, dd] = equivalence_single_vs_multi_ancilla(code, ch, LogicalState::ZeroL,
                                                            logical_z_obs(code));
        if (dn > 1e-10 || dd > 1e-10)
          return "delta num/den " + fmt(dn) + "/" + fmt(dd) + " at d=" + std::to_string(d);
      }
    }
    return std::string();
  });

  h.check("hvec.repeated_checks_exact_and_x_noise_breaks", [&] {
    ClassicalCode code = repetition(3);
    // Data and check noise confined to qubit 0 keeps accumulated supports
    // correctable.
    std::vector<PauliChannel::SiteDist> data_sites = {
        {0.7, 0.1, 0.1, 0.1}, {1, 0, 0, 0}, {1, 0, 0, 0}};
    auto data_ch = PauliChannel::from_sites(data_sites);
    std::vector<PauliChannel::SiteDist> check_sites = {
        {0.95, 0.0, 0.05, 0.0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
    auto check_ch = PauliChannel::from_sites(check_sites);
    for (int rounds : {2, 3}) {
      auto est = run_hvec_repeated(code, data_ch, check_ch, rounds, LogicalState::ZeroL,
                                   logical_z_obs(code));
      if (std::abs(est.ratio - 1.0) > 1e-10)
        return "rounds=" + std::to_string(rounds) + " ratio " + fmt(est.ratio);
    }
    std::vector<PauliChannel::SiteDist> bad_sites = {
        {0.95, 0.05, 0.0, 0.0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
    auto bad = PauliChannel::from_sites(bad_sites);
    // The residual from X-type check noise is Z-type: probe it on PlusL.
    auto est = run_hvec_repeated(code, data_ch, bad, 2, LogicalState::PlusL,
                                 logical_x_obs(code));
    return fail_if(std::abs(est.ratio - 1.0) < 1e-6,
                   "X-type check noise did not break exactness");
  });

  h.check("epp.matches_closed_forms", [&] {
    for (double p : {0.1, 0.3, 0.5}) {
      WernerParam wp(p);
      double fh = run_epp(EppVariant::Hvec, wp, true);
      double fs = run_epp(EppVariant::SqrtY, wp, true);
      double fsym = run_epp(EppVariant::SymmetrizedH, wp, true);
      if (std::abs(fh - eval(FormulaId::FH, 1, p)) > 1e-10)
        return "F_H mismatch at p=" + fmt(p) + ": " + fmt(fh);
      if (std::abs(fs - eval(FormulaId::FSqrtY, 1, p)) > 1e-10)
        return "F_sqrtY mismatch at p=" + fmt(p) + ": " + fmt(fs);
      if (std::abs(fsym - eval(FormulaId::FSymH, 1, p)) > 1e-10)
        return "F_S-H mismatch at p=" + fmt(p) + ": " + fmt(fsym);
      if (std::abs(run_epp(EppVariant::Hvec, wp, false) - 1.0) > 1e-10)
        return std::string("ideal-check H-VEC EPP fidelity is not 1");
    }
    return std::string();
  });

  h.check("hvec.sqrt_y_variant_matches_h_variant", [&] {
    for (int d : {3, 5}) {
      ClassicalCode code = repetition(d);
      auto [ch, leak] =
          restrict_to_correctable(PauliChannel::depolarizing_product(d, 0.2), code);
      (void)leak;
      auto esth = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                           HvecVariant::single_ancilla_h());
      auto estw = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                           HvecVariant::sqrt_y());
      if (std::abs(esth.ratio - estw.ratio) > 1e-10)
        return "ratio mismatch at d=" + std::to_string(d);
    }
    return std::string();
  });

  h.check("hvec.biased_basis_reproduces_relabeled_standard", [&] {
    ClassicalCode code = repetition(3);
    std::vector<PauliChannel::SiteDist> sites(3, {0.8, 0.02, 0.05, 0.13});
    auto ch = PauliChannel::from_sites(sites);
    for (PauliAxis sigma : {PauliAxis::Y, PauliAxis::X, PauliAxis::Z}) {
      PauliChannel relabeled = ch;
      if (sigma == PauliAxis::X)
        relabeled = ch.relabeled(PauliAxis::Y, PauliAxis::X, PauliAxis::Z);
      else if (sigma == PauliAxis::Z)
        relabeled = ch.relabeled(PauliAxis::Z, PauliAxis::X, PauliAxis::Y);
      auto biased = run_hvec(code, ch, LogicalState::ZeroL, logical_z_obs(code),
                             HvecVariant::biased(sigma));
      auto standard = run_hvec(code, relabeled, LogicalState::ZeroL, logical_z_obs(code),
                               HvecVariant::single_ancilla_h());
      if (std::abs(biased.numerator - standard.numerator) > 1e-10 ||
          std::abs(biased.denominator - standard.denominator) > 1e-10)
        return std::string("biased-basis relabeling equivalence failed");
    }
    return std::string();
  });

  h.check("surface.distance_property", [&] {
    for (int d : {3, 5}) {
      for (Basis basis : {Basis::Z, Basis::X}) {
        auto [pl, tail] = exhaustive_logical_error(d, 0.01, (d - 1) / 2, basis);
        (void)tail;
        if (pl != 0.0)
          return "weight <= (d-1)/2 error caused failure at d=" + std::to_string(d);
      }
    }
    return std::string();
  });

  h.check("surface.decoder_validity_on_sampled_errors", [&] {
    SurfaceLayout lay = build_layout(5);
    for (uint64_t shot = 0; shot < 400; ++shot) {
      CounterRng rng(h.seed, 9000 + shot);
      std::vector<uint8_t> defect_parity(lay.z_graph.check_coord.size(), 0);
      bool logical_parity = false;
      std::vector<uint8_t> err(static_cast<size_t>(lay.n), 0);
      for (int q = 0; q < lay.n; ++q) {
        if (rng.next_double() < 0.08) {
          err[static_cast<size_t>(q)] = 1;
          for (int ck : lay.z_graph.qubit_checks[static_cast<size_t>(q)])
            defect_parity[static_cast<size_t>(ck)] ^= 1;
          logical_parity ^= lay.z_graph.on_logical[static_cast<size_t>(q)];
        }
      }
      std::vector<int> defects;
      for (size_t ck = 0; ck < defect_parity.size(); ++ck)
        if (defect_parity[ck]) defects.push_back(static_cast<int>(ck));
      auto corr = decode_correction(lay.z_graph, lay.d, defects);
      // syndrome(e ^ c) must vanish.
      std::vector<uint8_t> resid_parity(lay.z_graph.check_coord.size(), 0);
      bool corr_logical = false;
      for (int q : corr) {
        err[static_cast<size_t>(q)] ^= 1;
        corr_logical ^= lay.z_graph.on_logical[static_cast<size_t>(q)];
      }
      for (int q = 0; q < lay.n; ++q)
        if (err[static_cast<size_t>(q)])
          for (int ck : lay.z_graph.qubit_checks[static_cast<size_t>(q)])
            resid_parity[static_cast<size_t>(ck)] ^= 1;
      for (uint8_t v : resid_parity)
        if (v) return std::string("residual syndrome nonzero after correction");
      auto dec = decode_defects(lay.z_graph, lay.d, defects);
      if (dec.crosses != corr_logical)
        return std::string("explicit correction parity disagrees with decoder");
      (void)logical_parity;
    }
    return std::string();
  });

  h.check("surface.mc_consistent_with_exhaustive", [&] {
    auto [oracle, tail] = exhaustive_logical_error(3, 0.02, 4, Basis::Z);
    (void)tail;
    McResult mc = mc_logical_error(3, 0.02, Basis::Z, 200000, h.seed + 17, 2);
    return fail_if(oracle < mc.interval_lo || oracle > mc.interval_hi,
                   "exhaustive value " + fmt(oracle) + " outside MC interval [" +
                       fmt(mc.interval_lo) + ", " + fmt(mc.interval_hi) + "]");
  });

  h.check("closed_forms.spot_values", [&] {
    struct Row {
      FormulaId id;
      int d;
      double p, want, tol;
    };
    const Row rows[] = {
        {FormulaId::RepX, 3, 0.1, 0.0124444, 1e-6},
        {FormulaId::Vec, 3, 0.1, 0.0036899, 1e-6},
        {FormulaId::Sur, 3, 0.1, 0.1368889, 1e-6},
        {FormulaId::CY, 3, 0.1, 1.512793, 2e-5},
        {FormulaId::FH, 1, 0.3, 0.49 / 0.54, 1e-12},
        {FormulaId::FSqrtY, 1, 0.3, 0.49 / 0.58, 1e-12},
        {FormulaId::FSymH, 1, 0.3, 0.98, 1e-12},
        {FormulaId::PCorClosed, 3, 0.1, 0.810, 1e-12},
        {FormulaId::PMaxClosed, 3, 0.3, 0.520, 1e-12},
    };
    for (const auto& r : rows) {
      double got = eval(r.id, r.d, r.p);
      if (std::abs(got - r.want) > r.tol)
        return "formula value mismatch: got " + fmt(got) + " want " + fmt(r.want);
    }
    return std::string();
  });

  return std::move(h.results);
}

int report(const std::vector<CheckResult>& results, std::ostream& os) {
  int failures = 0;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.pass) {
      os << "  (" << r.detail << ")";
      ++failures;
    }
    os << "\n";
  }
  os << results.size() - static_cast<size_t>(failures) << "/" << results.size()
     << " checks passed\n";
  return failures;
}

}  // namespace hvec::verify
