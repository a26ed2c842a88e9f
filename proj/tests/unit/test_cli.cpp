#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p)
{
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// runs the CLI inside `cwd`, capturing both streams next to it
Result run(const fs::path& cwd, const std::string& args)
{
  fs::create_directories(cwd);
  const fs::path o = cwd.parent_path() / (cwd.filename().string() + ".out");
  const fs::path e = cwd.parent_path() / (cwd.filename().string() + ".err");
  const std::string cmd = "cd '" + cwd.string() + "' && '" + CONTACTLINE_CLI + "' " + args + " >'" + o.string() +
                          "' 2>'" + e.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

fs::path fresh(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("contactline_cli_" + name);
  fs::remove_all(p);
  return p;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2 with usage text")
{
  for (const char* args : {"--bogus solve", "", "solve --h", "transmogrify"}) {
    const Result r = run(fresh("usage"), args);
    CHECK_MESSAGE(r.code == 2, args);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  CHECK(run(fresh("help"), "--help").code == 0);
}

TEST_CASE("Young relation violation exits 1 with error JSON")
{
  const Result r = run(fresh("young"), "solve --set gamma_jump=1.5 --out o");
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "InvalidConfig");
  CHECK(j["message"].get<std::string>().find("Young relation") != std::string::npos);
  CHECK_FALSE(fs::exists(fresh("young") / "o"));
}

TEST_CASE("verify passes on the default configuration")
{
  const Result r = run(fresh("verify"), "verify --out o");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["pass"] == true);
}

TEST_CASE("outputs stay inside the output directory; CLI overrides the config file")
{
  const fs::path cwd = fresh("confined");
  fs::create_directories(cwd);
  std::ofstream(cwd / "run.cfg") << "gamma_jump = -0.3\nh = 0.3\n";
  const Result r = run(cwd, "equilibrium --config run.cfg --h 0.25 --out o");
  REQUIRE(r.code == 0);
  int entries = 0;
  for (const auto& e : fs::directory_iterator(cwd)) {
    ++entries;
    CHECK((e.path().filename() == "o" || e.path().filename() == "run.cfg"));
  }
  CHECK(entries == 2);
  const auto j = nlohmann::json::parse(r.out);
  const auto summary = nlohmann::json::parse(slurp(cwd / j["dir"].get<std::string>() / "summary.json"));
  CHECK(summary["meta"]["config"]["h"] == 0.25);
  CHECK(summary["meta"]["config"]["gamma_jump"] == -0.3);
  CHECK(fs::exists(cwd / j["dir"].get<std::string>() / "equilibrium.csv"));
}

TEST_CASE("structured failures from the pipelines")
{
  // an amplitude beyond the flattening-map regime
  const Result r = run(fresh("degenerate"), "geometry --amplitude 0.6 --out o");
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j.contains("error"));
  CHECK(j.contains("details"));
}

}
