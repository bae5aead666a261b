#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvec/errors.hpp"

namespace hvec::cli {

// Sweep/overhead/epp configuration. Precedence: defaults < config file <
// environment (HVEC_ prefix) < command-line flags.
struct RunConfig {
  std::vector<std::string> codes = {"rep", "surface", "vec"};
  std::vector<int> d_list = {1, 3, 5, 7};
  double p_min = 0.01;
  double p_max = 0.74;
  int p_points = 15;
  bool p_log = true;
  std::vector<char> basis = {'X', 'Z'};
  uint64_t shots = 100000;
  std::optional<uint64_t> seed;
  std::string variant = "h";           // h | sqrty | multi | biased:<XYZ>
  std::string noise = "depolarizing";  // depolarizing | ybias
  int threads = 1;
  std::string out;         // empty writes to stdout
  std::string dump_state;  // epp debug dump of the pre-measurement register
};

// Flat key=value lines; '#' starts a comment.
void apply_config_file(RunConfig& cfg, const std::string& path);
// HVEC_<KEY> environment overrides, e.g. HVEC_P_POINTS=5.
void apply_env_overrides(RunConfig& cfg);
// One key=value assignment (shared by file/env/flag parsing).
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

std::vector<double> p_grid(const RunConfig& cfg);

// CSV bytes for each command; identical (config, seed) gives identical
// bytes for any thread count.
std::string run_sweep(const RunConfig& cfg);
std::string run_overhead(const RunConfig& cfg);
std::string run_epp_command(const RunConfig& cfg);

// Writes to cfg.out or stdout.
void emit(const RunConfig& cfg, const std::string& csv);

}  // namespace hvec::cli
