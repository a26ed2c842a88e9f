#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contactline/canonical_json.hpp"
#include "contactline/error.hpp"
#include "contactline/pipelines.hpp"

using namespace contactline;

namespace {

const char* description =
    "Capillary free-surface flow with dynamic contact points: equilibrium, flattening geometry,\n"
    "verification suites, manufactured solutions and the nonlinear fixed-point solver.";

int fail(const Error& e)
{
  std::cerr << canonical_dump(e.to_json());
  return 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{description, "contactline"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1, 1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  auto add_override = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  add_override("--out", "out", "output directory");
  add_override("--h", "h", "mesh width");
  add_override("--dt", "dt", "time step");
  add_override("--eps", "eps", "regularization parameter");
  add_override("--T", "T", "time horizon");
  add_override("--amplitude", "amplitude", "initial-data amplitude");
  add_override("--profile", "profile", "initial-data profile");
  app.add_option("--set", sets, "extra key=value override (repeatable)");

  const std::map<std::string, std::string> help{
      {"equilibrium", "solve the static capillary surface"},
      {"geometry", "build the mesh and the flattening map of the initial data"},
      {"verify", "geometric identity, Taylor remainder and Volterra suites"},
      {"mms", "manufactured-solution convergence study on h, h/2, h/4"},
      {"linear", "one linear solve with coefficients from the initial data"},
      {"solve", "nonlinear fixed-point solve with energy report"},
      {"sweep", "eps sweep with the eps = 0 attempt"}};
  for (const auto& name : command_names()) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--set expects key=value, got '" << s << "'\n" << app.help();
        return 2;
      }
      overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    apply_key_values(cfg, overrides);
    cfg.validate();
    const std::string command = app.get_subcommands().front()->get_name();
    const CommandOutput out = run_command(command, cfg);
    nlohmann::json msg{{"command", out.command}, {"dir", out.dir.string()}, {"results", out.summary["results"]}};
    std::cout << canonical_dump(msg);
    return 0;
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(Error(ErrorKind::InvalidConfig, e.what()));
  }
}
