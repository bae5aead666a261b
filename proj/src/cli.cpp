#include "hvec/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "hvec/closed_forms.hpp"
#include "hvec/dense_sim.hpp"
#include "hvec/rng.hpp"
#include "hvec/surface_mc.hpp"

namespace hvec::cli {

namespace {

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError("bad boolean value: " + v);
}

HvecVariant parse_variant(const std::string& v) {
  if (v == "h") return HvecVariant::single_ancilla_h();
  if (v == "sqrty") return HvecVariant::sqrt_y();
  if (v == "multi") return HvecVariant::multi_ancilla_h();
  if (v.rfind("biased:", 0) == 0 && v.size() == 8) {
    switch (v[7]) {
      case 'X':
        return HvecVariant::biased(PauliAxis::X);
      case 'Y':
        return HvecVariant::biased(PauliAxis::Y);
      case 'Z':
        return HvecVariant::biased(PauliAxis::Z);
      default:
        break;
    }
  }
  throw ConfigError("bad variant: " + v + " (want h|sqrty|multi|biased:<XYZ>)");
}

PauliChannel make_noise(const RunConfig& cfg, int n, double p) {
  if (cfg.noise == "depolarizing") return PauliChannel::depolarizing_product(n, p);
  if (cfg.noise == "ybias") return PauliChannel::biased_check_channel(n, p);
  throw ConfigError("bad noise model: " + cfg.noise + " (want depolarizing|ybias)");
}

// Exact repetition-code logical error rates. q is the per-qubit marginal of
// error components in the failing basis.
double rep_exact_logical_error(int d, double q, char basis) {
  if (basis == 'Z') {
    // Majority vote fails when more than (d-1)/2 bits flip.
    double sum = 0.0;
    for (int w = (d + 1) / 2; w <= d; ++w)
      sum += static_cast<double>(binomial(d, w)) * std::pow(q, w) * std::pow(1.0 - q, d - w);
    return sum;
  }
  // No phase protection: any flip is logical.
  return 1.0 - std::pow(1.0 - q, d);
}

struct Row {
  std::string text;
};

// Runs jobs in a pool; results land in index order so output bytes are
// independent of the thread count.
std::vector<Row> run_jobs(int threads, size_t count, const std::function<Row(size_t)>& job) {
  std::vector<Row> rows(count);
  int nt = std::max(1, threads);
  if (nt == 1) {
    for (size_t i = 0; i < count; ++i) rows[i] = job(i);
    return rows;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) rows[i] = job(i);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

uint64_t derive_row_seed(uint64_t seed, size_t index) {
  return CounterRng(seed, 0x517f5eedull ^ static_cast<uint64_t>(index)).next_u64();
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "code") {
    cfg.codes = split_csv(value);
    for (const auto& c : cfg.codes)
      if (c != "rep" && c != "vec" && c != "surface")
        throw ConfigError("bad code: " + c + " (want rep|vec|surface)");
  } else if (key == "d") {
    cfg.d_list.clear();
    for (const auto& tok : split_csv(value)) cfg.d_list.push_back(std::stoi(tok));
  } else if (key == "p_min") {
    cfg.p_min = std::stod(value);
  } else if (key == "p_max") {
    cfg.p_max = std::stod(value);
  } else if (key == "p_points") {
    cfg.p_points = std::stoi(value);
  } else if (key == "p_log") {
    cfg.p_log = parse_bool(value);
  } else if (key == "basis") {
    cfg.basis.clear();
    for (const auto& tok : split_csv(value)) {
      if (tok != "X" && tok != "Z") throw ConfigError("bad basis: " + tok);
      cfg.basis.push_back(tok[0]);
    }
  } else if (key == "shots") {
    cfg.shots = std::stoull(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "variant") {
    parse_variant(value);  // validates
    cfg.variant = value;
  } else if (key == "noise") {
    cfg.noise = value;
  } else if (key == "threads") {
    cfg.threads = std::stoi(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "dump_state") {
    cfg.dump_state = value;
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
    apply_key_value(cfg, line.substr(start, eq - start), line.substr(eq + 1));
  }
}

void apply_env_overrides(RunConfig& cfg) {
  static const char* keys[] = {"code",  "d",     "p_min",   "p_max", "p_points", "p_log",
                               "basis", "shots", "seed",    "variant", "noise",  "threads",
                               "out"};
  for (const char* key : keys) {
    std::string env = "HVEC_";
    for (const char* c = key; *c; ++c) env.push_back(static_cast<char>(std::toupper(*c)));
    if (const char* v = std::getenv(env.c_str())) apply_key_value(cfg, key, v);
  }
}

std::vector<double> p_grid(const RunConfig& cfg) {
  if (cfg.p_points < 1) throw ConfigError("p_points must be >= 1");
  if (cfg.p_min <= 0.0 && cfg.p_log) throw ConfigError("log grid requires p_min > 0");
  if (cfg.p_max < cfg.p_min) throw ConfigError("p_max must be >= p_min");
  std::vector<double> grid;
  if (cfg.p_points == 1) return {cfg.p_min};
  for (int i = 0; i < cfg.p_points; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(cfg.p_points - 1);
    grid.push_back(cfg.p_log
                       ? std::exp(std::log(cfg.p_min) +
                                  t * (std::log(cfg.p_max) - std::log(cfg.p_min)))
                       : cfg.p_min + t * (cfg.p_max - cfg.p_min));
  }
  return grid;
}

std::string run_sweep(const RunConfig& cfg) {
  bool stochastic =
      std::find(cfg.codes.begin(), cfg.codes.end(), "surface") != cfg.codes.end();
  if (stochastic && !cfg.seed)
    throw ConfigError("surface-code sweeps are stochastic: --seed is required");
  uint64_t seed = cfg.seed.value_or(0);
  HvecVariant variant = parse_variant(cfg.variant);

  std::vector<double> grid = p_grid(cfg);
  std::vector<std::string> codes = cfg.codes;
  std::sort(codes.begin(), codes.end());
  std::vector<char> bases = cfg.basis;
  std::sort(bases.begin(), bases.end());
  std::vector<int> ds = cfg.d_list;
  std::sort(ds.begin(), ds.end());

  struct Job {
    std::string code;
    char basis;
    int d;
    double p;
  };
  std::vector<Job> jobs;
  for (const auto& code : codes)
    for (char b : bases)
      for (int d : ds)
        for (double p : grid) jobs.push_back(Job{code, b, d, p});

  bool theory_available = cfg.noise == "depolarizing";
  auto job = [&](size_t i) -> Row {
    const Job& j = jobs[i];
    std::ostringstream os;
    double theory = 0.0;
    if (theory_available) {
      FormulaId id = j.code == "rep" ? (j.basis == 'Z' ? FormulaId::RepX : FormulaId::RepZ)
                     : j.code == "vec" ? FormulaId::Vec
                                       : FormulaId::Sur;
      theory = eval(id, j.d, j.p);
    }
    try {
      if (j.code == "surface") {
        uint64_t row_seed = derive_row_seed(seed, i);
        McResult r = mc_logical_error(j.d, j.p, j.basis == 'Z' ? Basis::Z : Basis::X,
                                      cfg.shots, row_seed, 1);
        os << j.code << "," << j.basis << "," << j.d << "," << fmt10(j.p) << "," << r.shots
           << "," << r.failures << "," << fmt10(r.p_hat) << "," << fmt10(r.interval_lo)
           << "," << fmt10(r.interval_hi) << "," << r.seed;
      } else {
        double p_l;
        if (j.code == "rep") {
          double q = cfg.noise == "depolarizing" ? 2.0 * j.p / 3.0 : j.p;
          p_l = rep_exact_logical_error(j.d, q, j.basis);
        } else {
          ClassicalCode code = repetition(j.d);
          PauliChannel ch = make_noise(cfg, j.d, j.p);
          LogicalState st = j.basis == 'Z' ? LogicalState::ZeroL : LogicalState::PlusL;
          PauliOp obs = j.basis == 'Z' ? PauliOp::z_type(BitVec::unit(j.d, 0))
                                       : PauliOp::x_type(BitVec::ones(j.d));
          VirtualEstimate est = run_hvec(code, ch, st, obs, variant);
          if (!est.denominator_ok)
            throw DomainError("virtual estimate denominator vanished");
          p_l = 0.5 * std::abs(1.0 - est.ratio);
        }
        os << j.code << "," << j.basis << "," << j.d << "," << fmt10(j.p) << ",0,0,"
           << fmt10(p_l) << "," << fmt10(p_l) << "," << fmt10(p_l) << ",0";
      }
    } catch (const CapacityError& e) {
      throw CapacityError("d=" + std::to_string(j.d) + " variant=" + cfg.variant + ": " +
                          e.what());
    }
    if (theory_available)
      os << "," << fmt10(theory);
    else
      os << ",";
    os << "\n";
    return Row{os.str()};
  };

  std::string csv = "code,basis,d,p,shots,failures,p_l,lo,hi,seed,theory\n";
  for (auto& r : run_jobs(cfg.threads, jobs.size(), job)) csv += r.text;
  return csv;
}

std::string run_overhead(const RunConfig& cfg) {
  HvecVariant variant = parse_variant(cfg.variant);
  std::vector<int> ds = cfg.d_list;
  std::sort(ds.begin(), ds.end());
  std::vector<double> grid = p_grid(cfg);

  struct Job {
    int d;
    double p;
  };
  std::vector<Job> jobs;
  for (int d : ds)
    for (double p : grid) jobs.push_back(Job{d, p});

  auto job = [&](size_t i) -> Row {
    const Job& j = jobs[i];
    ClassicalCode code = repetition(j.d);
    PauliChannel ch = make_noise(cfg, j.d, j.p);
    VirtualEstimate est = run_hvec(code, ch, LogicalState::ZeroL,
                                   PauliOp::z_type(BitVec::unit(j.d, 0)), variant);
    if (!est.denominator_ok) throw DomainError("overhead denominator vanished");
    double sim = sampling_overhead(std::abs(est.denominator));
    double theory = eval(FormulaId::CY, j.d, j.p);
    return Row{std::to_string(j.d) + "," + fmt10(j.p) + "," + fmt10(sim) + "," +
               fmt10(theory) + "\n"};
  };

  std::string csv = "d,p,overhead_sim,overhead_theory\n";
  for (auto& r : run_jobs(cfg.threads, jobs.size(), job)) csv += r.text;
  return csv;
}

std::string run_epp_command(const RunConfig& cfg) {
  static const std::pair<EppVariant, const char*> variants[] = {
      {EppVariant::Conventional1, "conventional1"},
      {EppVariant::Conventional2, "conventional2"},
      {EppVariant::Hvec, "hvec"},
      {EppVariant::SqrtY, "sqrty"},
      {EppVariant::SymmetrizedH, "symmetrized_h"},
  };
  std::vector<double> grid = p_grid(cfg);
  for (double p : grid)
    if (p > 0.75) throw ConfigError("EPP sweeps require p <= 0.75");

  struct Job {
    EppVariant v;
    const char* name;
    double p;
    bool noisy;
  };
  std::vector<Job> jobs;
  for (const auto& [v, name] : variants)
    for (double p : grid)
      for (bool noisy : {false, true}) jobs.push_back(Job{v, name, p, noisy});

  auto job = [&](size_t i) -> Row {
    const Job& j = jobs[i];
    double f = run_epp(j.v, WernerParam(j.p), j.noisy);
    return Row{std::string(j.name) + "," + fmt10(j.p) + "," + (j.noisy ? "1" : "0") + "," +
               fmt10(f) + "\n"};
  };

  std::string csv = "variant,p,check_noisy,fidelity\n";
  for (auto& r : run_jobs(cfg.threads, jobs.size(), job)) csv += r.text;

  if (!cfg.dump_state.empty()) {
    if (grid.size() != 1)
      throw ConfigError("dump_state requires a single-point p grid (p_points=1)");
    std::ofstream dump(cfg.dump_state);
    if (!dump) throw ConfigError("cannot open dump file: " + cfg.dump_state);
    for (const auto& j : jobs) {
      DensityOperator state(1);
      run_epp(j.v, WernerParam(j.p), j.noisy, &state);
      dump << "# variant=" << j.name << " p=" << fmt10(j.p)
           << " check_noisy=" << (j.noisy ? 1 : 0) << "\n";
      state.write_text(dump);
    }
  }
  return csv;
}

void emit(const RunConfig& cfg, const std::string& csv) {
  if (cfg.out.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + cfg.out);
  out << csv;
}

}  // namespace hvec::cli
