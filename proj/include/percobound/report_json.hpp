#pragma once

// JSON forms of the library's reports. Field names match the struct members.

#include <string>

#include "json.hpp"
#include "percobound/certify.hpp"
#include "percobound/harness.hpp"
#include "percobound/oracle.hpp"
#include "percobound/theory.hpp"

namespace percobound {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const BoundReport& r) {
  return {
      {"epsilon", r.epsilon},
      {"alpha", r.alpha},
      {"k_bar", r.k_bar},
      {"sigma", r.sigma},
      {"sigma2", r.sigma2},
      {"term_kbar", r.term_kbar},
      {"term_alpha_mismatch", r.term_alpha_mismatch},
      {"term_dad", r.term_dad},
      {"term_dpad", r.term_dpad},
      {"term_sigma", r.term_sigma},
      {"total", r.total},
      {"lambda2_expected", r.lambda2_expected},
      {"a_lower_bound", r.a_lower_bound},
  };
}

inline ordered_json to_json(const ThresholdReport& r) {
  return {
      {"n", r.n},
      {"d", r.d},
      {"lambda", r.lambda},
      {"epsilon", r.epsilon},
      {"mode", std::string(to_string(r.mode))},
      {"c1", r.c1},
      {"c2", r.c2},
      {"log_c1", r.log_c1},
      {"beta4_min", r.beta4_min},
      {"p_threshold", r.p_threshold},
      {"log_one_minus_p", r.log_one_minus_p},
      {"vacuous", r.vacuous},
      {"monotone_violations", r.monotone_violations},
  };
}

inline ordered_json to_json(const RegularityCertificate& c) {
  ordered_json j;
  j["n"] = c.n;
  j["is_regular"] = c.is_regular;
  j["d"] = c.d ? ordered_json(*c.d) : ordered_json(nullptr);
  j["lambda"] = c.lambda ? ordered_json(*c.lambda) : ordered_json(nullptr);
  j["lambda_over_d"] = c.lambda_over_d ? ordered_json(*c.lambda_over_d) : ordered_json(nullptr);
  j["is_connected"] = c.is_connected;
  j["is_bipartite"] = c.is_bipartite;
  j["lambda_equals_d"] = c.lambda_equals_d;
  return j;
}

inline ordered_json to_json(const ExperimentConfig& c) {
  return {
      {"graph_source", c.graph_source},
      {"profile_source", c.profile_source},
      {"alpha", c.alpha ? ordered_json(*c.alpha) : ordered_json("auto")},
      {"epsilon", c.epsilon},
      {"trials", c.trials},
      {"seed", c.seed},
      {"alpha_grid", c.alpha_grid},
      {"output", c.output},
  };
}

inline ordered_json to_json(const ExperimentSummary& s) {
  return {
      {"n_trials", s.n_trials},
      {"alpha", s.alpha},
      {"alpha_optimized", s.alpha_optimized},
      {"connected_fraction", s.connected_fraction},
      {"connected_stderr", s.connected_stderr},
      {"mean_deviation_norm", s.mean_deviation_norm},
      {"max_deviation_norm", s.max_deviation_norm},
      {"empirical_tail_at_bound", s.empirical_tail_at_bound},
      {"tail_allowance", s.tail_allowance},
      {"per_trial_eq3_violations", s.per_trial_eq3_violations},
      {"connectivity_crosscheck_mismatches", s.connectivity_crosscheck_mismatches},
      {"passed", s.passed()},
      {"bound_report", to_json(s.bound_report)},
  };
}

inline ordered_json to_json(const ExactDistribution& d) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : d.entries)
    entries.push_back({{"pattern_bits", pattern_bits(e.pattern, d.n)},
                       {"probability", e.probability},
                       {"statistic", format_real(e.statistic)}});
  return {{"n", d.n},
          {"statistic_kind", std::string(to_string(d.kind))},
          {"total_probability", d.total_probability},
          {"entries", std::move(entries)}};
}

}  // namespace percobound
