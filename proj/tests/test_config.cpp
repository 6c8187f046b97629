#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "dynsense/config.hpp"

using namespace dynsense;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("defaults are valid") {
  const auto c = parse_config("");
  CHECK_NOTHROW(c.validate());
  CHECK(c.layout.type == "grid");
  CHECK(c.num_sensors() == 49);
  CHECK(c.num_emitters() == 49);
  CHECK(c.query.q == 29);
  CHECK(c.query.q_extra == 5);
  CHECK(c.noise_var() == Catch::Approx(0.1));
  CHECK_FALSE(c.sim.seed.has_value());
}

TEST_CASE("INI sections and overrides") {
  const std::string ini =
      "[layout]\ntype = circular\nN_p = 8\nN_s = 16\nn_c = 2\nradii = 0.5, 1.5\n"
      "[channel]\nfidelity = noiseless\nnoise_var = 0.2\n"
      "[query]\nq = 8\nq_extra = 2\n"
      "[sim]\nseed = 42\nT = 100\n";
  const auto c = parse_config(ini, {"sim.T=300", "fusion.T_err = 6"});
  CHECK(c.layout.circular());
  CHECK(c.num_sensors() == 16);
  CHECK(c.num_emitters() == 8);
  CHECK(c.layout.radii == std::vector<double>{0.5, 1.5});
  CHECK(c.channel.fidelity == Fidelity::Noiseless);
  CHECK(c.noise_var() == 0.2);
  CHECK(c.require_seed() == 42);
  CHECK(c.sim.windows == 300);
  CHECK(c.fusion.reset_period == 6);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown keys and malformed values are rejected") {
  CHECK_THROWS_WITH(parse_config("[layout]\ncolour = red\n"), ContainsSubstring("layout.colour"));
  CHECK_THROWS_WITH(parse_config("[bogus]\nq = 1\n"), ContainsSubstring("bogus.q"));
  CHECK_THROWS_WITH(parse_config("", {"query.q=abc"}), ContainsSubstring("query.q"));
  CHECK_THROWS_WITH(parse_config("", {"query.q=-3"}), ContainsSubstring("query.q"));
  CHECK_THROWS_WITH(parse_config("", {"signal.eta0=nan"}), ContainsSubstring("signal.eta0"));
  CHECK_THROWS_WITH(parse_config("", {"layout.type=hexagon"}), ContainsSubstring("layout.type"));
  CHECK_THROWS_WITH(parse_config("", {"channel.fidelity=exact"}), ContainsSubstring("channel.fidelity"));
  CHECK_THROWS_AS(parse_config("", {"query.q"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("", {"sweep.eps="}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("stray = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/dynsense.ini"), std::invalid_argument);
}

TEST_CASE("validation names the offending key") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"layout.N=50", "layout.N"},
      {"signal.eta0=1.5", "signal.eta0"},
      {"signal.P=0", "signal.P"},
      {"channel.W=0", "channel.W"},
      {"query.q=49", "query.q + query.q_extra"},
      {"query.q=60", "query.q"},
      {"solver.xi=0", "solver.xi"},
      {"fusion.eps=0", "fusion.eps"},
      {"fusion.T_err=0", "fusion.T_err"},
      {"sim.T=0", "sim.T"},
      {"sweep.T_err=1,0", "sweep.T_err"},
      {"baseline.W=0", "baseline.W"},
  };
  for (const auto& [override_text, key] : cases) {
    const auto c = parse_config("", {override_text});
    CHECK_THROWS_WITH(c.validate(), ContainsSubstring(key));
  }
}

TEST_CASE("circular layout validation") {
  const std::vector<std::string> base{"layout.type=circular", "query.q=8", "query.q_extra=0"};
  auto with = [&](const std::string& extra) {
    auto o = base;
    o.push_back(extra);
    return parse_config("", o);
  };
  CHECK_NOTHROW(parse_config("", base).validate());
  CHECK_THROWS_WITH(with("layout.N_s=30").validate(), ContainsSubstring("even"));
  CHECK_THROWS_WITH(with("layout.N_s=8").validate(), ContainsSubstring("layout.N_s"));
  CHECK_THROWS_WITH(with("layout.radii=0.6").validate(), ContainsSubstring("layout.radii"));
  CHECK_THROWS_WITH(with("layout.radii=0.6,0.6").validate(), ContainsSubstring("distinct"));
  CHECK_THROWS_WITH(with("layout.radii=1,1.4").validate(), ContainsSubstring("layout.r_p"));
  CHECK_THROWS_WITH(with("query.q=7").validate(), ContainsSubstring("even"));
}

TEST_CASE("certification settings") {
  const auto ok = parse_config("", {"layout.type=circular"});
  CHECK_NOTHROW(ok.validate_certify());
  CHECK_THROWS_WITH(parse_config("", {"layout.type=circular", "certify.q=7"}).validate_certify(),
                    ContainsSubstring("certify.q"));
  CHECK_THROWS_WITH(parse_config("", {"layout.type=circular", "certify.samples=10"}).validate_certify(),
                    ContainsSubstring("certify.samples"));
  CHECK_THROWS_WITH(parse_config("", {"layout.type=circular", "certify.counts=8,9"}).validate_certify(),
                    ContainsSubstring("certify.counts"));
}

TEST_CASE("seed is mandatory") {
  CHECK_THROWS_WITH(parse_config("").require_seed(), ContainsSubstring("--seed"));
  CHECK(parse_config("", {"sim.seed=7"}).require_seed() == 7);
}

TEST_CASE("resolved config round-trips through the comment block") {
  const auto c = parse_config("", {"sim.seed=3", "signal.eta0=0.125", "sweep.eps=0.5,1"});
  const std::string block = config_comment_block(c, "simulate");
  CHECK(block.rfind("# dynsense simulate\n", 0) == 0);
  CHECK_THAT(block, ContainsSubstring("# signal.eta0 = 0.125\n"));
  CHECK_THAT(block, ContainsSubstring("# sweep.eps = 0.5,1\n"));
  CHECK_THAT(block, ContainsSubstring("# channel.noise_var = 0.1\n"));

  std::vector<std::string> overrides;
  for (const auto& [key, value] : c.entries())
    if (key != "sim.seed" || value != "unset") overrides.push_back(key + "=" + value);
  const auto again = parse_config("", overrides);
  CHECK(again.entries() == c.entries());
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1e-8) == "1e-08");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
