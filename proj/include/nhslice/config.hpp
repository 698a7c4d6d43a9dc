#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhslice/model.hpp"

namespace nhs {

struct RunConfig {
  // grid
  int ne = 16;
  int n = 30;
  double length = 300e3;   ///< m
  double p_top = 1e4;      ///< Pa
  double p0 = 1e5;         ///< reference and initial surface pressure, Pa
  double hybrid_exponent = 1.5;
  // dynamics
  VerticalMode mode = VerticalMode::eulerian;
  double f = 0.0;
  double nu = 0.0;         ///< hyperviscosity during spin-up; the audit window runs with nu = 0
  int remap_interval = 3;
  bool monotone_remap = true;
  // time stepping
  double dt = 10.0;
  double spinup = 0.0;     ///< s
  double run_length = 7200.0;  ///< audit window, s
  int diag_interval = 1;
  std::string tableau = "ars232";
  // initial state
  std::string test_case = "gravity_wave";
  double T0 = 250.0;
  double amplitude = 1.0;  ///< K
  double half_width = 20e3;  ///< m
  double mean_wind = 0.0;  ///< m/s
  // output
  std::string output_dir = "output";

  void validate() const;
  ModelConfig model_config(bool with_dissipation) const;
};

/// One entry per config key. The same table drives the file parser, the
/// printer and the command-line flags.
struct ConfigKey {
  std::string key;
  std::string help;
};
const std::vector<ConfigKey>& config_keys();

void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& c, const std::string& key);

/// key = value lines, '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& is, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
void print_config(std::ostream& os, const RunConfig& c);

/// Applies NHSLICE_OUTPUT_DIR if set.
void apply_environment(RunConfig& c);

}  // namespace nhs
