#pragma once

#include <string>
#include <vector>

#include "frachelm/vec3.hpp"

namespace frachelm {

/// Flat `key = value` experiment description. `#` starts a comment. Lists
/// use commas, vectors use `x,y,z`, vector lists separate entries with `;`.
struct ExperimentConfig {
  // scattering parameters
  double s = 0.9;
  double k = 8.0;
  std::vector<double> k_list;  // farfield sweeps; empty means {k}
  int branch = 1;
  double k0 = 1.0;
  // grid
  int n = 32;
  double L = 1.0;
  // potential: "builtin" or a field file whose real part is Q
  std::string potential = "builtin";
  Vec3 potential_center{};
  double potential_width = 0.25;
  double potential_height = 1.0;
  double potential_cutoff_inner = 0.55;
  double potential_cutoff_outer = 0.8;
  // incident wave
  std::string incident = "plane";  // plane | herglotz
  double amplitude = 0.1;
  Vec3 direction{1.0, 0.0, 0.0};
  int herglotz_order = 16;
  double herglotz_width = 0.5;
  // solver
  double tol = 1e-10;
  int max_iter = 50;
  // far field
  std::vector<Vec3> directions{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  // inversion
  std::string oracle = "synthetic-born";  // synthetic-born | nonlinear | from-file
  std::string oracle_file;
  int lattice_n = 16;
  double xi_max = 16.0;
  double l_min = 8.0;
  double l_scale = 4.0;
  double probe_amplitude = 0.05;
  // output
  std::string output_dir;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParseError (syntax, unknown or repeated keys, empty input) or
/// ValidationError (out-of-range values), both with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every key with its effective value; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

/// Cross-field checks for one subcommand (e.g. invert needs 4/5 < s < 3/2
/// and a file for the from-file oracle). Throws ValidationError.
void validate_for(const ExperimentConfig& config, const std::string& subcommand);

}  // namespace frachelm
