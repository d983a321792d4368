#include <catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "percobound/generators.hpp"
#include "percobound/graph_io.hpp"
#include "percobound/harness.hpp"
#include "percobound/report_json.hpp"
#include "support/oracles.hpp"

using namespace percobound;
using Catch::Matchers::WithinAbs;

TEST_CASE("ExperimentConfig validation", "[harness]") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.epsilon = 1.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.epsilon = 0.1;
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.trials = 5;
  c.alpha = -1.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("run_experiment does not depend on the thread count", "[harness]") {
  const WeightedGraph g = petersen_graph();
  const SurvivalProfile profile({0.9, 0.8, 0.95, 0.7, 0.9, 0.85, 0.99, 0.6, 0.9, 0.75});
  ExperimentConfig config;
  config.trials = 3000;
  config.seed = 99;
  config.epsilon = 0.1;
  const auto one = run_experiment(g, profile, config, 1);
  const std::string ref = to_json(one.summary).dump();
  for (std::size_t threads : {4, 8}) {
    const auto many = run_experiment(g, profile, config, threads);
    CHECK(to_json(many.summary).dump() == ref);
    CHECK(many.records == one.records);
  }
  CHECK(one.summary.alpha_optimized);
  CHECK(one.summary.per_trial_eq3_violations == 0);
  CHECK(one.summary.connectivity_crosscheck_mismatches == 0);
  CHECK(one.summary.passed());
}

TEST_CASE("K5, p = 0.95: connected fraction against the oracle", "[harness][statistical]") {
  const WeightedGraph g = complete_graph(5);
  const auto profile = SurvivalProfile::uniform(5, 0.95);
  ExperimentConfig config;
  config.trials = 10000;
  config.seed = 5;
  config.alpha = 3.8;
  const auto result = run_experiment(g, profile, config);
  // Every pattern of K5 is connected.
  const auto exact = exact_mean(
      exact_distribution(g, profile, 3.8, StatisticKind::kConnectivityIndicator));
  CHECK(exact == 1.0);
  CHECK(result.summary.connected_fraction == 1.0);

  // A graph where disconnection is possible.
  const WeightedGraph c6 = cycle_graph(6);
  const auto p6 = SurvivalProfile::uniform(6, 0.95);
  const auto r6 = run_experiment(c6, p6, config);
  const double exact6 =
      exact_mean(exact_distribution(c6, p6, 3.8, StatisticKind::kConnectivityIndicator));
  const auto connected = static_cast<std::size_t>(std::llround(r6.summary.connected_fraction * 10000));
  CHECK(testing::wilson_interval(connected, 10000, 3.0).contains(exact6));
  CHECK(r6.summary.per_trial_eq3_violations == 0);
}

TEST_CASE("summary fields", "[harness]") {
  ExperimentConfig config;
  config.trials = 1;
  config.seed = 12;
  config.alpha = 2.0;
  const auto a = run_experiment(cycle_graph(5), SurvivalProfile::uniform(5, 0.8), config);
  const auto b = run_experiment(cycle_graph(5), SurvivalProfile::uniform(5, 0.8), config);
  CHECK(to_json(a.summary).dump() == to_json(b.summary).dump());
  CHECK(a.summary.n_trials == 1);
  CHECK_FALSE(a.summary.alpha_optimized);
  CHECK(a.summary.alpha == 2.0);
  CHECK_THAT(a.summary.tail_allowance, WithinAbs(0.1 + 3.0 * std::sqrt(0.09), 1e-15));
  CHECK(a.summary.mean_deviation_norm == a.records[0].deviation_norm);
}

TEST_CASE("JSON reports", "[harness][json]") {
  ExperimentConfig config;
  config.graph_source = "family=cycle n=4";
  config.profile_source = "uniform:0.9";
  const auto j = to_json(config);
  CHECK(j["alpha"] == "auto");
  CHECK(j["trials"] == 1000);

  const auto bound = to_json(theorem1_bound(cycle_graph(4), SurvivalProfile::uniform(4, 0.9), 1.8, 0.1));
  for (const char* key : {"epsilon", "alpha", "k_bar", "sigma", "term_kbar", "term_alpha_mismatch",
                          "term_dad", "term_dpad", "term_sigma", "total", "lambda2_expected",
                          "a_lower_bound"})
    CHECK(bound.contains(key));
  CHECK_THAT(bound["total"].get<double>(), WithinAbs(8.763029117755084, 1e-9));

  const auto thr = to_json(survival_threshold(1000, 20, 10, 0.1, ThresholdMode::kCorollary));
  CHECK(thr["c2"] == 104976.0);
  CHECK(thr["mode"] == "corollary");
  CHECK(thr["vacuous"] == true);
}

TEST_CASE("trial CSV", "[harness]") {
  ExperimentConfig config;
  config.trials = 5;
  config.alpha = 1.0;
  const auto result = run_experiment(path_graph(3), SurvivalProfile::uniform(3, 0.5), config, 1);
  std::ostringstream full;
  write_trials_csv(result.records, full);
  std::string line;
  std::istringstream in(full.str());
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 6);
  CHECK(full.str().rfind("trial_index,pattern_bits,survivor_count,is_connected,a_delta,", 0) == 0);

  std::ostringstream capped;
  write_trials_csv(result.records, capped, 2);
  CHECK(capped.str().find("# truncated: 2 of 5 trials written\n") != std::string::npos);
}

TEST_CASE("graph files round trip", "[harness][json]") {
  const auto path = std::filesystem::temp_directory_path() / "percobound_graph_roundtrip.json";
  const WeightedGraph g(4, {{0, 1, 0.5}, {1, 3, 2.0}, {2, 3, 1.0}});
  write_graph_file(g, path.string());
  CHECK(read_graph_file(path.string()) == g);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_graph_file(path.string()), Error);
}
