#include <CLI11.hpp>
#include <iostream>

#include "hvec/cli.hpp"
#include "hvec/verify.hpp"

namespace {

// Exit codes: 0 success, 1 verification failure, 2 config error, 3 capacity
// error.
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;

struct FlagValues {
  std::string config_path;
  std::string code, d, p_min, p_max, p_points, basis, shots, seed, variant, noise, threads,
      out, dump_state;
  bool p_log = false;
  bool p_linear = false;
};

void add_common_flags(CLI::App* cmd, FlagValues& f) {
  cmd->add_option("--config", f.config_path, "flat key=value config file");
  cmd->add_option("--code", f.code, "comma list of rep|vec|surface");
  cmd->add_option("--d", f.d, "comma list of odd distances");
  cmd->add_option("--p-min", f.p_min, "smallest physical error rate");
  cmd->add_option("--p-max", f.p_max, "largest physical error rate");
  cmd->add_option("--p-points", f.p_points, "grid size");
  cmd->add_flag("--p-log", f.p_log, "log-spaced p grid (default)");
  cmd->add_flag("--p-linear", f.p_linear, "linearly spaced p grid");
  cmd->add_option("--basis", f.basis, "comma list of X|Z");
  cmd->add_option("--shots", f.shots, "Monte Carlo shots per surface point");
  cmd->add_option("--seed", f.seed, "RNG seed (required for surface sweeps)");
  cmd->add_option("--variant", f.variant, "h|sqrty|multi|biased:<XYZ>");
  cmd->add_option("--noise", f.noise, "depolarizing|ybias");
  cmd->add_option("--threads", f.threads, "worker count (output is identical for any)");
  cmd->add_option("--out", f.out, "output CSV path (default stdout)");
}

hvec::cli::RunConfig build_config(const FlagValues& f) {
  hvec::cli::RunConfig cfg;
  if (!f.config_path.empty()) hvec::cli::apply_config_file(cfg, f.config_path);
  hvec::cli::apply_env_overrides(cfg);
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) hvec::cli::apply_key_value(cfg, key, v);
  };
  set("code", f.code);
  set("d", f.d);
  set("p_min", f.p_min);
  set("p_max", f.p_max);
  set("p_points", f.p_points);
  set("basis", f.basis);
  set("shots", f.shots);
  set("seed", f.seed);
  set("variant", f.variant);
  set("noise", f.noise);
  set("threads", f.threads);
  set("out", f.out);
  set("dump_state", f.dump_state);
  if (f.p_log && f.p_linear) throw hvec::ConfigError("--p-log conflicts with --p-linear");
  if (f.p_log) cfg.p_log = true;
  if (f.p_linear) cfg.p_log = false;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-VEC simulation and analytics toolkit"};
  app.require_subcommand(1);

  FlagValues f;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "logical error rates vs p for rep/vec/surface codes");
  add_common_flags(sweep, f);
  CLI::App* overhead =
      app.add_subcommand("overhead", "sampling overhead of the virtual code");
  add_common_flags(overhead, f);
  CLI::App* epp = app.add_subcommand("epp", "2-to-1 entanglement purification fidelities");
  add_common_flags(epp, f);
  epp->add_option("--dump-state", f.dump_state,
                  "debug dump of the pre-measurement register (single p point)");
  CLI::App* verify = app.add_subcommand("verify", "run the oracle verification suite");
  uint64_t verify_seed = 2024;
  verify->add_option("--seed", verify_seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      auto results = hvec::verify::run_all_checks(verify_seed);
      int failures = hvec::verify::report(results, std::cout);
      return failures == 0 ? 0 : kExitVerifyFailed;
    }
    hvec::cli::RunConfig cfg = build_config(f);
    std::string csv;
    if (sweep->parsed())
      csv = hvec::cli::run_sweep(cfg);
    else if (overhead->parsed())
      csv = hvec::cli::run_overhead(cfg);
    else if (epp->parsed())
      csv = hvec::cli::run_epp_command(cfg);
    hvec::cli::emit(cfg, csv);
    return 0;
  } catch (const hvec::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const hvec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
