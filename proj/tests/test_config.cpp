#include "doctest.h"
#include "gcalc/config.hpp"
#include "gcalc/error.hpp"
#include "gcalc/experiments.hpp"

#include <cstdlib>

using namespace gcalc;

TEST_CASE("config text round trip") {
  ExperimentConfig c;
  c.command = "wiener";
  c.mesh = "builtin:sphere:2";
  c.potential = "0.5*x^2 # not a comment";
  c.observable = "x \"quoted\"";
  c.marks = {0.25, 0.5};
  c.tol = 1.0 / 3.0;
  c.samples = 12345;
  c.seed = 99;
  c.levels = {3, 5};
  const std::string text = to_config_text(c);
  CHECK(parse_config_text(text) == c);
  CHECK(config_from_json(to_json(c)) == c);
}

TEST_CASE("config parsing") {
  const auto c = parse_config_text(
      "# comment\n[run]\ncommand = \"integrate\"\n\n[input]\nmesh = builtin:interval:4  # trailing\n"
      "cochain = \"left(x)\"\n[numeric]\ndepths = 5\ntol = 1e-8\nlevels = [4, 6]\n");
  CHECK(c.command == "integrate");
  CHECK(c.mesh == "builtin:interval:4");
  CHECK(c.cochain == "left(x)");
  CHECK(c.depths == 5);
  CHECK(c.tol == 1e-8);
  CHECK(c.levels == std::vector<double>{4, 6});
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nnonsense = 1\n"), doctest::Contains("cli: line 2: unknown config key"), Error);
  CHECK_THROWS_WITH_AS(parse_config_text("[extra]\n"), doctest::Contains("unknown section"), Error);
  CHECK_THROWS_WITH_AS(parse_config_text("[numeric]\ntol = 1\ntol = 2\n"), doctest::Contains("duplicate"), Error);
  CHECK_THROWS_WITH_AS(parse_config_text("[numeric]\ndepths = two\n"), doctest::Contains("bad integer"), Error);
  CHECK_THROWS_AS(parse_config_text("[numeric]\ntol = -1\n"), Error);
  CHECK_THROWS_AS(parse_config_text("[run]\nformat = \"xml\"\n"), Error);
  CHECK_THROWS_AS(parse_config_text("mesh\n"), Error);
  ExperimentConfig c;
  CHECK_THROWS_AS(set_config_value(c, "input.tol", "1"), Error);
  set_config_value(c, "numeric.hbar", "0.25");
  set_config_value(c, "seed", "5");
  CHECK(c.hbar == 0.25);
  CHECK(c.seed == 5);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"run", {{"bogus", 1}}}}), Error);
}

TEST_CASE("seed from the environment") {
  setenv("GCALC_SEED", "42", 1);
  CHECK(parse_config_text("").seed == 42);
  CHECK(parse_config_text("[run]\nseed = 3\n").seed == 3);
  unsetenv("GCALC_SEED");
  CHECK(parse_config_text("").seed == 1);
}

TEST_CASE("commands") {
  ExperimentConfig c;
  c.command = "ftc-exact";
  auto r = run_command(c);
  CHECK(r.exit_code == 0);
  CHECK(r.report["sum"].get<double>() == 1.0);
  CHECK(r.report["exact"].get<bool>());

  c = {};
  c.command = "euler";
  c.mesh = "builtin:sphere:octahedron";
  CHECK(run_command(c).report["chi"].get<long>() == 2);

  c = {};
  c.command = "dw";
  c.group = "builtin:S3";
  c.mesh = "builtin:torus:1";
  r = run_command(c);
  CHECK(r.report["Z"].get<double>() == 3.0);
  CHECK(r.report["matches_oracle"].get<bool>());

  c = {};
  c.command = "moyal";
  c.f = "q";
  c.g = "p";
  c.at = {1.0, 2.0};
  c.hbar = 0.5;
  r = run_command(c);
  CHECK(r.report["value"][0].get<double>() == doctest::Approx(2.0));
  CHECK(r.report["value"][1].get<double>() == doctest::Approx(0.5));

  c = {};
  c.command = "stokes";
  CHECK(run_command(c).report["agree"].get<bool>());

  c = {};
  c.command = "integrate";
  c.depths = 3;
  r = run_command(c);
  CHECK(r.csv.rfind("depth,n_cells,sum,delta,order_estimate\n", 0) == 0);

  c = {};
  c.command = "nope";
  CHECK_THROWS_WITH_AS(run_command(c), doctest::Contains("cli: unknown command"), Error);
}

TEST_CASE("identical configs give identical reports") {
  ExperimentConfig c;
  c.command = "wiener";
  c.potential = "0.5*x^2";
  c.samples = 2000;
  c.mesh_log2 = 4;
  c.seed = 11;
  c.threads = 1;
  const std::string a = run_command(c).report.dump();
  c.threads = 3;
  CHECK(run_command(c).report.dump() == a);
  c.seed = 12;
  CHECK(run_command(c).report.dump() != a);
}
