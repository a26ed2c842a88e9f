#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace contactline {

/// Physical parameters of the vessel, fluid and contact-point law.
struct PhysicalConfig {
  double ell = 1.0;            ///< half-width of the channel
  double channel_height = 2.0; ///< upper bound L for the free surface
  double H_bot = 0.5;          ///< depth of the bottom region below x2 = 0
  double mu = 1.0;
  double sigma = 1.0;          ///< surface tension
  double g = 1.0;
  double beta = 1.0;           ///< Navier slip coefficient
  double gamma_jump = -0.2;    ///< wall energy jump
  double kappa = 1.0;          ///< slope of the response function at zero
  double c3 = 0.5;             ///< cubic coefficient of the response function
  double eps = 0.1;
  double delta = 0.5;          ///< weight exponent
  double mean_height = 0.5;    ///< fixes the fluid volume: 2 ell * mean_height above x2 = 0
  double j_floor = 0.1;        ///< minimum admissible Jacobian of the flattening map

  /// Checks that need no equilibrium (Young relation, positivity); appends messages.
  void collect_errors(std::vector<std::string>& errs) const;
  void validate() const;
};

struct MeshParams {
  double h = 0.2;
  double grading = -1.0; ///< corner grading exponent; <= 0 selects 1 - delta
  int n_eq_nodes = 48;
  int n_modes = 128;     ///< cosine modes of surface fields

  double effective_grading(double delta) const { return grading > 0.0 ? grading : 1.0 - delta; }
};

struct TimeParams {
  double T = 0.2;
  double dt = 0.02;
  int steps() const;
};

struct ContractionConfig {
  double sigma_small = 2.0; ///< ball radius for K^{1/2}
  double E0_max = 0.15;     ///< cap on the initial energy
  double tol_fix = 1e-6;
  int max_iter = 30;
  std::vector<double> eps_schedule{0.1, 0.05, 0.025};
};

/// Named analytic initial surface perturbation.
struct InitialDataRecipe {
  std::string profile = "mode1";
  double amplitude = 0.01;
};

struct RunConfig {
  PhysicalConfig phys;
  MeshParams mesh;
  TimeParams time;
  ContractionConfig contraction;
  InitialDataRecipe initial;
  std::string out = "out";

  /// Aggregate validation; throws InvalidConfig listing every problem.
  void validate() const;

  nlohmann::json to_json() const;
  /// FNV-1a hash of the canonical JSON (output directory excluded).
  std::string hash() const;
};

/// Key-value config text: `key = value` per line, `#` comments.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Apply key-value overrides; unknown keys raise InvalidConfig.
void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv);

RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Names accepted by InitialDataRecipe::profile.
std::vector<std::string> profile_names();

} // namespace contactline
