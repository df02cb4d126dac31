#pragma once

// Run configuration: INI-style text with [grid], [run], [initial] and
// [diagnostics] sections.

#include <cstdint>
#include <string>
#include <vector>

#include "phnls/analysis.hpp"

namespace phnls {

struct RunConfig {
  // [grid]
  int n_y = 64;
  double box_len = 32.0;
  int n_h = 16;
  int quad_count = 0;  // 0 = 4 n_h
  // [run]
  std::string system = "pnls";
  double dt = 1e-3;
  double t_end = 1.0;
  double mu = 1.0;  // 1 defocusing, 0 linear
  int order = 2;
  std::string f_strategy = "tensor";
  int m_tau = 0;
  std::vector<double> lambda_list{2.0, 4.0, 8.0};
  double t_rescaled_end = 0.5;
  double dt_dcr = 1e-3;
  int outputs = 10;
  std::uint64_t seed = 0;
  // [initial]
  std::string initial_kind = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double center_y1 = 0.0;
  double center_y2 = 0.0;
  int xi1 = 0;  // boost, in lattice units
  int xi2 = 0;
  int mode_n = 0;
  int mode_k1 = 0;
  int mode_k2 = 0;
  double noise = 0.0;
  std::string initial_file;
  // [diagnostics]
  double eps0 = 0.25;
  int diag_every = 10;
  int snapshot_every = 0;
  double cutoff = 0.0;
  bool morawetz = true;
};

/// Parses text; `source` names the input in error messages.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::string& path);

/// Sets one key ("section.key" or a bare key) from its textual value.
void set_config_value(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);

/// Cross-field checks; throws invalid_argument.
void validate_config(const RunConfig& config);

System parse_system(const std::string& name);
std::vector<double> parse_lambda_list(const std::string& text);

GridPtr make_grid(const RunConfig& config);
Field make_initial(const RunConfig& config, GridPtr grid);

/// splitmix64 stream; uniform() returns values in [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace phnls
