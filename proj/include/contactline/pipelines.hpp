#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactline/config.hpp"
#include "contactline/report.hpp"

namespace contactline {

/// What a subcommand produced: its summary and the files written under `dir`.
struct CommandOutput {
  std::string command;
  std::filesystem::path dir;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::filesystem::path> files;
};

const std::vector<std::string>& command_names();

/// `<command>-<config hash>`; the run directory is `<out>/<run id>`.
std::string run_id(const std::string& command, const RunConfig& cfg);

/// Randomized smooth perturbations with max |eta| and max |dt eta| equal to `amplitude`.
std::vector<SurfacePerturbation> random_perturbations(double ell, int n_modes, int count, double amplitude,
                                                      std::uint64_t seed);

/// Verification suites. Each returns {"pass": bool, ...measured values}.
nlohmann::json identity_checks(const RunConfig& cfg, int count = 20, double amplitude = 0.05,
                               std::uint64_t seed = 20240611);
nlohmann::json remainder_checks();
nlohmann::json volterra_checks();

CommandOutput run_equilibrium(const RunConfig& cfg);
CommandOutput run_geometry(const RunConfig& cfg);
/// Writes the suite results, then throws VerificationFailed when any suite misses its tolerance.
CommandOutput run_verify(const RunConfig& cfg);
/// Manufactured-solution study on h, h/2, h/4.
CommandOutput run_mms(const RunConfig& cfg);
/// One linear solve: coefficients and nonlinear forcing from the Taylor path of the initial data.
CommandOutput run_linear(const RunConfig& cfg);
CommandOutput run_solve(const RunConfig& cfg);
CommandOutput run_sweep(const RunConfig& cfg);

/// Dispatch by name; unknown names raise InvalidConfig.
CommandOutput run_command(const std::string& command, const RunConfig& cfg);

} // namespace contactline
