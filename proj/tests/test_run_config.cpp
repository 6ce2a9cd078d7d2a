#include "doctest.h"
#include "ctmc/generator.hpp"
#include "ctmc/run_config.hpp"

using namespace ctmc;

TEST_CASE("config grammar") {
  const ConfigPairs p = parse_config_text(
      "# a comment\n"
      "\n"
      "model = ring   # trailing comment\n"
      "  n=64\n"
      "t-end = 1.5e3\r\n");
  REQUIRE(p.size() == 3);
  CHECK(p.at("model") == "ring");
  CHECK(p.at("n") == "64");
  CHECK(p.at("t-end") == "1.5e3");
  CHECK_THROWS_AS(parse_config_text("n = 1\nn = 2\n"), Error);
  CHECK_THROWS_AS(parse_config_text("just words\n"), Error);
  CHECK_THROWS_AS(parse_config_text("Bad_Key = 1\n"), Error);
  CHECK_THROWS_AS(parse_config_text(" = 1\n"), Error);
}

TEST_CASE("typed fields and their validation") {
  const RunConfig c = RunConfig::from_pairs(
      {{"model", "star"}, {"n", "100"}, {"lambda", "0.5"}, {"seed", "7"}, {"only", "2,9"}, {"quick", "true"}});
  CHECK(c.model == ModelKind::star);
  CHECK(c.n == 100);
  CHECK(c.birth_rate() == 0.5);
  CHECK(c.death_rate() == 1.0);
  CHECK(*c.seed == 7);
  CHECK(c.only == std::set<int>{2, 9});
  CHECK(c.quick);

  CHECK_THROWS_AS(RunConfig::from_pairs({{"colour", "red"}}), Error);
  CHECK_THROWS_AS(RunConfig::from_pairs({{"n", "-3"}}), Error);
  CHECK_THROWS_AS(RunConfig::from_pairs({{"n", "12abc"}}), Error);
  CHECK_THROWS_AS(RunConfig::from_pairs({{"eps", "nan"}}), Error);
  CHECK_THROWS_AS(RunConfig::from_pairs({{"model", "torus"}}), Error);
  CHECK_THROWS_AS(RunConfig::from_pairs({{"quick", "maybe"}}), Error);
}

TEST_CASE("M/M/1 death rate follows eps") {
  RunConfig c;
  c.eps = 1e-3;
  CHECK(c.death_rate() == doctest::Approx(1.001).epsilon(1e-15));
  c.mu = 3.0;
  CHECK(c.death_rate() == 3.0);
}

TEST_CASE("text snapshot round-trips every field") {
  RunConfig c;
  c.model = ModelKind::telegraph;
  c.eps = 0.1 + 0.2;
  c.lambda = 1.0 / 3.0;
  c.seed = 123456789012345ULL;
  c.t_end = 4096.0;
  c.dt = 0.0625;
  c.window_first = 3;
  c.only = {1, 4};
  c.out_dir = "some dir";
  const RunConfig back = RunConfig::from_pairs(parse_config_text(c.to_text()));
  CHECK(back.to_pairs() == c.to_pairs());
  CHECK(back.eps == c.eps);
  CHECK(*back.lambda == *c.lambda);
  CHECK(back.only == c.only);
  CHECK(back.out_dir == "some dir");
}

TEST_CASE("overrides replace file entries") {
  const ConfigPairs merged = merge_pairs({{"n", "10"}, {"model", "ring"}}, {{"n", "20"}});
  CHECK(merged.at("n") == "20");
  CHECK(merged.at("model") == "ring");
  CHECK(format_double(0.1) == "0.10000000000000001");
}
