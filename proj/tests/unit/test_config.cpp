#include <doctest.h>

#include <fstream>

#include "contactline/config.hpp"
#include "contactline/error.hpp"

using namespace contactline;

TEST_SUITE("config") {

TEST_CASE("key-value parsing with comments and blanks")
{
  const auto kv = parse_key_values("# header\n  h = 0.3  # trailing\n\nprofile=cos\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("h") == "0.3");
  CHECK(kv.at("profile") == "cos");
  CHECK_THROWS_AS(parse_key_values("h 0.3\n"), Error);
}

TEST_CASE("overrides, unknown keys and bad numbers")
{
  RunConfig cfg;
  apply_key_values(cfg, {{"h", "0.25"}, {"E0_max", "0.3"}, {"max_iter", "7"}, {"eps_schedule", "0.2,0.1"}});
  CHECK(cfg.mesh.h == 0.25);
  CHECK(cfg.contraction.E0_max == 0.3);
  CHECK(cfg.contraction.max_iter == 7);
  CHECK(cfg.contraction.eps_schedule == std::vector<double>{0.2, 0.1});
  for (const auto& bad : std::vector<std::map<std::string, std::string>>{{{"colour", "red"}}, {{"h", "wide"}}}) {
    try {
      apply_key_values(cfg, bad);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
  }
}

TEST_CASE("file values sit between defaults and explicit overrides")
{
  const auto path = std::filesystem::temp_directory_path() / "contactline_config_test.txt";
  std::ofstream(path) << "h = 0.3\ndt = 0.01\n";
  RunConfig cfg = load_config_file(path.string());
  CHECK(cfg.mesh.h == 0.3);
  CHECK(cfg.time.dt == 0.01);
  CHECK(cfg.time.T == RunConfig{}.time.T);
  apply_key_values(cfg, {{"h", "0.4"}});
  CHECK(cfg.mesh.h == 0.4);
  CHECK_THROWS_AS(load_config_file("/nonexistent/contactline.cfg"), Error);
}

TEST_CASE("validation aggregates every problem")
{
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.phys.gamma_jump = 2.0;
  cfg.mesh.h = -1.0;
  cfg.contraction.E0_max = 0.0;
  cfg.initial.profile = "square";
  cfg.contraction.eps_schedule = {0.1, 0.2};
  try {
    cfg.validate();
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    CHECK(e.details()["problems"].size() == 5);
    CHECK(std::string(e.what()).find("Young") != std::string::npos);
  }
}

TEST_CASE("hash identifies the configuration but not the output directory")
{
  RunConfig a, b;
  b.out = "elsewhere";
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.initial.amplitude = 0.02;
  CHECK(a.hash() != b.hash());
  CHECK(a.to_json()["E0_max"] == a.contraction.E0_max);
}

TEST_CASE("profile names")
{
  const auto names = profile_names();
  CHECK(names.front() == RunConfig{}.initial.profile);
  for (const char* n : {"mode1", "mode2", "mode3", "cos", "zero"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
}

}
