#include <doctest.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "cascade_clock/errors.hpp"
#include "cascade_clock/experiments.hpp"
#include "cascade_clock/sequence_io.hpp"
#include "fixtures.hpp"

using namespace cascade_clock;

namespace {

TrialConfig star_config(std::size_t stretch) {
  TrialConfig cfg;
  cfg.graph = FixedGraph{std::make_shared<const Graph>(fixtures::star(6))};
  cfg.params = CascadeParams{1.0, 0.0};
  cfg.s0_vertices = VertexSet{0};
  cfg.stretch = stretch;
  cfg.seed = 5;
  return cfg;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

TEST_CASE("ErSpec and SbmSpec defaults") {
  ErSpec er;
  er.n = 1000;
  CHECK(er.edge_probability() == doctest::Approx(0.1));
  er.p = 0.25;
  CHECK(er.edge_probability() == 0.25);

  SbmSpec sbm;
  CHECK(sbm.block_sizes() == std::vector<std::size_t>{71, 4929});
}

TEST_CASE("sample_initial_set") {
  const VertexSet s = sample_initial_set(50, 5, 3);
  CHECK(s.size() == 5);
  CHECK(s == normalized(s));
  CHECK(s.back() < 50);
  CHECK(sample_initial_set(4, 4, 1) == VertexSet{0, 1, 2, 3});
  CHECK_THROWS_AS(sample_initial_set(3, 4, 1), ParameterError);
}

TEST_CASE("run_trial marks cascades that never spread as degenerate") {
  TrialConfig cfg;
  cfg.graph = ErSpec{200, 3.0, std::nullopt};
  cfg.params = CascadeParams{0.0, 0.0};
  cfg.seed = 1;
  const TrialResult r = run_trial(cfg);
  CHECK(r.degenerate);
  CHECK(r.cascade_steps == 0);
  CHECK(r.outcomes.empty());
}

TEST_CASE("run_trial on the deterministic star") {
  for (std::size_t stretch : {1, 2, 3}) {
    const TrialResult r = run_trial(star_config(stretch));
    REQUIRE_FALSE(r.degenerate);
    CHECK(r.cascade_steps == 1);
    CHECK(r.observed_steps == 2 * stretch - 1);
    REQUIRE(r.outcomes.size() == 2);
    for (const auto& o : r.outcomes) {
      CHECK_FALSE(o.skipped);
      CHECK(o.distance == 0.0);
      CHECK(o.time_ns > 0);
    }
    if (stretch == 1) {
      CHECK(r.outcomes[0].clock == r.truth);
      CHECK(r.outcomes[1].clock == r.truth);
    }
  }
}

TEST_CASE("run_trial is reproducible") {
  TrialConfig cfg;
  cfg.graph = ErSpec{300, 3.0, std::nullopt};
  cfg.seed = 77;
  const TrialResult a = run_trial(cfg);
  const TrialResult b = run_trial(cfg);
  CHECK(a.cascade_steps == b.cascade_steps);
  CHECK(a.observed_steps == b.observed_steps);
  CHECK(a.truth == b.truth);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    CHECK(a.outcomes[i].clock == b.outcomes[i].clock);
    CHECK(a.outcomes[i].distance == b.outcomes[i].distance);
  }
}

TEST_CASE("run_trial skips DP above the cap") {
  TrialConfig cfg;
  cfg.graph = ErSpec{300, 3.0, std::nullopt};
  cfg.seed = 4;
  cfg.dp_cap = 0;
  const TrialResult r = run_trial(cfg);
  REQUIRE_FALSE(r.degenerate);
  CHECK_FALSE(r.outcomes[0].skipped);
  CHECK(r.outcomes[1].skipped);
  CHECK(std::isnan(r.outcomes[1].distance));
  CHECK_FALSE(r.outcomes[1].clock.has_value());
}

TEST_CASE("run_trial config errors") {
  TrialConfig cfg;
  cfg.graph = ErSpec{10, 3.0, std::nullopt};
  cfg.s0_size = 11;
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
  cfg.s0_size = 1;
  cfg.stretch = 0;
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
  cfg.stretch = 2;
  cfg.params.p_n = 2.0;
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
}

TEST_CASE("Fig. 1 default trial populates both estimators") {
  TrialConfig cfg;  // n = 3000, p = n^{-1/3}, p_n = 0.1, p_e = 1e-7, l = 2
  cfg.seed = 2;
  const TrialResult r = run_trial(cfg);
  REQUIRE_FALSE(r.degenerate);
  REQUIRE(r.outcomes.size() == 2);
  CHECK_FALSE(r.outcomes[1].skipped);
  CHECK(r.outcomes[0].distance >= 0.0);
  CHECK(r.outcomes[0].distance <= 1.0);
  CHECK(r.outcomes[0].time_ns < r.outcomes[1].time_ns);
}

TEST_CASE("sweep") {
  SUBCASE("stretch 1 on the deterministic star") {
    const SweepTable t = sweep(star_config(1), "stretch", {1.0}, 4, 2);
    REQUIRE(t.size() == 2);
    for (const auto& row : t) {
      CHECK(row.axis == "stretch");
      CHECK(row.trials == 4);
      CHECK(row.mean_distance == 0.0);
      CHECK(row.sd_distance == 0.0);
    }
  }
  SUBCASE("thread count does not change results") {
    TrialConfig base;
    base.graph = ErSpec{150, 3.0, std::nullopt};
    base.params.p_n = 0.3;
    base.seed = 9;
    const auto serial = sweep(base, "p_n", {0.2, 0.4}, 6, 1);
    const auto parallel = sweep(base, "p_n", {0.2, 0.4}, 6, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].mean_distance == parallel[i].mean_distance);
      CHECK(serial[i].trials == parallel[i].trials);
      CHECK(serial[i].degenerate == parallel[i].degenerate);
    }
  }
  SUBCASE("SBM inter-block axis") {
    TrialConfig base;
    base.graph = SbmSpec{400, {}, 0.2, 0.01};
    base.seed = 3;
    const auto t = sweep(base, "inter_block", {0.01, 0.2}, 3, 1);
    REQUIRE(t.size() == 4);
    CHECK(t[0].estimator == EstimatorKind::FastClock);
    CHECK(t[1].estimator == EstimatorKind::Dp);
    for (const auto& row : t) CHECK(row.trials + row.degenerate + row.skipped == 3);
  }
  SUBCASE("axis errors") {
    TrialConfig base;
    CHECK_THROWS_AS(sweep(base, "colour", {1.0}, 1), ConfigError);
    CHECK_THROWS_AS(sweep(base, "inter_block", {0.1}, 1), ConfigError);
    CHECK_THROWS_AS(sweep(base, "stretch", {1.5}, 1), ConfigError);
    CHECK_THROWS_AS(sweep(base, "n", {100.0}, 0), ConfigError);
  }
}

TEST_CASE("with_axis_value") {
  TrialConfig base;
  CHECK(std::get<ErSpec>(with_axis_value(base, "n", 500).graph).n == 500);
  CHECK(std::get<ErSpec>(with_axis_value(base, "density_alpha", 2).graph)
            .edge_probability() == doctest::Approx(std::pow(3000.0, -0.5)));
  CHECK(with_axis_value(base, "p_n", 0.3).params.p_n == 0.3);
  CHECK(with_axis_value(base, "stretch", 4).stretch == 4);
  TrialConfig sbm;
  sbm.graph = SbmSpec{};
  CHECK(std::get<SbmSpec>(with_axis_value(sbm, "inter_block", 0.05).graph).p_inter == 0.05);
  CHECK(with_axis_value(sbm, "sbm_p_n", 0.5).params.p_n == 0.5);
  CHECK_THROWS_AS(with_axis_value(base, "sbm_p_n", 0.5), ConfigError);
}

TEST_CASE("results CSV") {
  fixtures::TempDir dir;
  const auto file = dir / "out.csv";

  write_results({}, file);
  CHECK(read_text_file(file) == std::string(kResultsHeader) + "\n");

  SweepRow row;
  row.axis = "n";
  row.value = 1000;
  row.estimator = EstimatorKind::Dp;
  row.mean_distance = 0.125;
  row.sd_distance = 0.0;
  row.mean_time_ns = 12345;
  row.sd_time_ns = 0.5;
  row.trials = 7;
  write_results({row}, file);

  std::ifstream in(file);
  std::string header;
  std::string line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(split(header).size() == 8);
  const auto fields = split(line);
  REQUIRE(fields.size() == 8);
  CHECK(fields[0] == "n");
  CHECK(std::stod(fields[1]) == 1000.0);
  CHECK(fields[2] == "dp");
  CHECK(std::stod(fields[3]) == 0.125);
  CHECK(std::stod(fields[4]) == 0.0);
  CHECK(std::stod(fields[5]) == 12345.0);
  CHECK(std::stod(fields[6]) == 0.5);
  CHECK(std::stoul(fields[7]) == 7);

  SweepRow skipped = row;
  skipped.mean_distance = std::nan("");
  skipped.trials = 0;
  CHECK(results_to_csv({skipped}).find(",nan,") != std::string::npos);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.0) == "0.0");
  CHECK(format_real(1.0) == "1.0");
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1e-7) == "1e-07");
  CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("sweep config JSON") {
  const SweepConfig cfg = sweep_config_from_json(R"({
    "graph": {"model": "sbm", "n": 5000, "p_intra": 0.2, "p_inter": 0.01},
    "p_n": 0.1, "p_e": 1e-7, "stretch": 2, "estimators": ["fastclock"],
    "dp_cap": 30, "max_steps": 50,
    "sweep": {"axis": "inter_block", "values": [0.01, 0.05], "trials": 5}
  })");
  CHECK(std::get<SbmSpec>(cfg.base.graph).p_inter == 0.01);
  CHECK(cfg.base.params.p_e == 1e-7);
  CHECK(cfg.base.estimators == std::vector<EstimatorKind>{EstimatorKind::FastClock});
  CHECK(cfg.base.dp_cap == 30);
  CHECK(cfg.base.max_steps == 50);
  CHECK(cfg.axis == "inter_block");
  CHECK(cfg.values == std::vector<double>{0.01, 0.05});
  CHECK(cfg.trials == 5);

  const SweepConfig er = sweep_config_from_json(R"({"graph": {"model": "er", "n": 100, "p": 0.2}})");
  CHECK(std::get<ErSpec>(er.base.graph).edge_probability() == 0.2);

  CHECK_THROWS_AS(sweep_config_from_json("{\"bogus\": 1}"), ConfigError);
  CHECK_THROWS_AS(sweep_config_from_json("{\"graph\": {\"model\": \"ws\"}}"), ConfigError);
  CHECK_THROWS_AS(sweep_config_from_json("{\"p_n\": \"high\"}"), ConfigError);
  CHECK_THROWS_AS(sweep_config_from_json("{\"estimators\": [\"mlp\"]}"), ConfigError);
  CHECK_THROWS_AS(sweep_config_from_json("[1"), ConfigError);
}
