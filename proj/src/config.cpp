#include "contactline/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "contactline/canonical_json.hpp"
#include "contactline/error.hpp"

namespace contactline {

void PhysicalConfig::collect_errors(std::vector<std::string>& errs) const
{
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0)) errs.push_back(std::string(name) + " must be positive");
  };
  positive(ell, "ell");
  positive(channel_height, "channel_height");
  positive(H_bot, "H_bot");
  positive(mu, "mu");
  positive(sigma, "sigma");
  positive(beta, "beta");
  positive(kappa, "kappa");
  positive(mean_height, "mean_height");
  if (!(g >= 0.0)) errs.push_back("g must be non-negative");
  if (!(c3 >= 0.0)) errs.push_back("c3 must be non-negative");
  if (!(eps >= 0.0 && eps <= 1.0)) errs.push_back("eps must lie in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) errs.push_back("delta must lie in (0, 1)");
  if (!(j_floor > 0.0 && j_floor < 1.0)) errs.push_back("j_floor must lie in (0, 1)");
  if (!(sigma > 0.0) || !(std::abs(gamma_jump) < sigma))
    errs.push_back("Young relation violated: |gamma_jump| must be smaller than sigma");
  if (!(mean_height < channel_height)) errs.push_back("mean_height must be below channel_height");
}

void PhysicalConfig::validate() const
{
  std::vector<std::string> errs;
  collect_errors(errs);
  if (!errs.empty()) throw Error(ErrorKind::InvalidConfig, errs.front(), {{"problems", errs}});
}

int TimeParams::steps() const
{
  return std::max(1, static_cast<int>(std::lround(T / dt)));
}

void RunConfig::validate() const
{
  std::vector<std::string> errs;
  phys.collect_errors(errs);
  if (!(mesh.h > 0.0 && mesh.h <= 1.0)) errs.push_back("h must lie in (0, 1]");
  if (mesh.grading > 1.0) errs.push_back("grading must not exceed 1");
  if (mesh.n_eq_nodes < 8) errs.push_back("n_eq_nodes must be at least 8");
  if (mesh.n_modes < 8) errs.push_back("n_modes must be at least 8");
  if (!(time.T > 0.0)) errs.push_back("T must be positive");
  if (!(time.dt > 0.0 && time.dt <= time.T)) errs.push_back("dt must lie in (0, T]");
  else if (std::abs(time.T / time.dt - std::round(time.T / time.dt)) > 1e-9 * time.T / time.dt)
    errs.push_back("T must be an integer multiple of dt");
  if (!(contraction.tol_fix > 0.0)) errs.push_back("tol_fix must be positive");
  if (contraction.max_iter < 2) errs.push_back("max_iter must be at least 2");
  if (!(contraction.sigma_small > 0.0)) errs.push_back("sigma_small must be positive");
  if (!(contraction.E0_max > 0.0)) errs.push_back("E0_max must be positive");
  for (std::size_t i = 0; i < contraction.eps_schedule.size(); ++i) {
    const double e = contraction.eps_schedule[i];
    if (!(e > 0.0 && e <= 1.0)) errs.push_back("eps_schedule entries must lie in (0, 1]");
    if (i > 0 && !(e < contraction.eps_schedule[i - 1])) errs.push_back("eps_schedule must be decreasing");
  }
  bool known = false;
  for (const auto& p : profile_names()) known = known || p == initial.profile;
  if (!known) errs.push_back("unknown profile '" + initial.profile + "'");
  if (!std::isfinite(initial.amplitude)) errs.push_back("amplitude must be finite");
  if (!errs.empty()) throw Error(ErrorKind::InvalidConfig, errs.front(), {{"problems", errs}});
}

nlohmann::json RunConfig::to_json() const
{
  nlohmann::json j;
  j["ell"] = phys.ell;
  j["channel_height"] = phys.channel_height;
  j["H_bot"] = phys.H_bot;
  j["mu"] = phys.mu;
  j["sigma"] = phys.sigma;
  j["g"] = phys.g;
  j["beta"] = phys.beta;
  j["gamma_jump"] = phys.gamma_jump;
  j["kappa"] = phys.kappa;
  j["c3"] = phys.c3;
  j["eps"] = phys.eps;
  j["delta"] = phys.delta;
  j["mean_height"] = phys.mean_height;
  j["j_floor"] = phys.j_floor;
  j["h"] = mesh.h;
  j["grading"] = mesh.grading;
  j["n_eq_nodes"] = mesh.n_eq_nodes;
  j["n_modes"] = mesh.n_modes;
  j["T"] = time.T;
  j["dt"] = time.dt;
  j["sigma_small"] = contraction.sigma_small;
  j["E0_max"] = contraction.E0_max;
  j["tol_fix"] = contraction.tol_fix;
  j["max_iter"] = contraction.max_iter;
  j["eps_schedule"] = contraction.eps_schedule;
  j["profile"] = initial.profile;
  j["amplitude"] = initial.amplitude;
  return j;
}

std::string RunConfig::hash() const
{
  const std::string text = canonical_dump(to_json());
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::map<std::string, std::string> parse_key_values(const std::string& text)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(lineno) + " is not key = value",
                  {{"line", lineno}});
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace {

double to_double(const std::string& key, const std::string& v)
{
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidConfig, "value of '" + key + "' is not a number", {{"key", key}, {"value", v}});
  }
}

int to_int(const std::string& key, const std::string& v)
{
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw Error(ErrorKind::InvalidConfig, "value of '" + key + "' must be an integer", {{"key", key}});
  return static_cast<int>(d);
}

} // namespace

void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv)
{
  std::map<std::string, double*> reals = {
      {"ell", &cfg.phys.ell},           {"channel_height", &cfg.phys.channel_height},
      {"H_bot", &cfg.phys.H_bot},       {"mu", &cfg.phys.mu},
      {"sigma", &cfg.phys.sigma},       {"g", &cfg.phys.g},
      {"beta", &cfg.phys.beta},         {"gamma_jump", &cfg.phys.gamma_jump},
      {"kappa", &cfg.phys.kappa},       {"c3", &cfg.phys.c3},
      {"eps", &cfg.phys.eps},           {"delta", &cfg.phys.delta},
      {"mean_height", &cfg.phys.mean_height}, {"j_floor", &cfg.phys.j_floor},
      {"h", &cfg.mesh.h},               {"grading", &cfg.mesh.grading},
      {"T", &cfg.time.T},               {"dt", &cfg.time.dt},
      {"sigma_small", &cfg.contraction.sigma_small}, {"tol_fix", &cfg.contraction.tol_fix},
      {"E0_max", &cfg.contraction.E0_max},
      {"amplitude", &cfg.initial.amplitude}};
  std::map<std::string, int*> ints = {{"n_eq_nodes", &cfg.mesh.n_eq_nodes},
                                      {"n_modes", &cfg.mesh.n_modes},
                                      {"max_iter", &cfg.contraction.max_iter}};
  for (const auto& [key, value] : kv) {
    if (auto it = reals.find(key); it != reals.end()) *it->second = to_double(key, value);
    else if (auto jt = ints.find(key); jt != ints.end()) *jt->second = to_int(key, value);
    else if (key == "profile") cfg.initial.profile = value;
    else if (key == "out") cfg.out = value;
    else if (key == "eps_schedule") {
      cfg.contraction.eps_schedule.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.contraction.eps_schedule.push_back(to_double(key, item));
    } else
      throw Error(ErrorKind::InvalidConfig, "unknown config key '" + key + "'", {{"key", key}});
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read config file " + path, {{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  apply_key_values(base, parse_key_values(ss.str()));
  return base;
}

std::vector<std::string> profile_names()
{
  return {"mode1", "mode2", "mode3", "cos", "cos2", "sin", "poly", "zero"};
}

} // namespace contactline
