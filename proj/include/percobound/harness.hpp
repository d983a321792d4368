#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/oracle.hpp"
#include "percobound/parallel.hpp"
#include "percobound/percolation.hpp"
#include "percobound/theory.hpp"

namespace percobound {

struct ExperimentConfig {
  std::string graph_source;    // file path or generator description, for provenance
  std::string profile_source;  // "uniform:<p>" or a file path, for provenance
  std::optional<double> alpha;  // empty: choose alpha by optimize_alpha
  double epsilon = 0.1;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t alpha_grid = kDefaultAlphaGrid;
  std::string output;

  void validate() const {
    require_epsilon(epsilon);
    if (trials < 1) throw ParameterError("trials must be >= 1");
    if (alpha) require_alpha(*alpha);
    if (alpha_grid < 2) throw ParameterError("alpha grid needs at least 2 points");
  }
};

struct ExperimentSummary {
  std::size_t n_trials = 0;
  double alpha = 0.0;
  bool alpha_optimized = false;
  double connected_fraction = 0.0;
  double connected_stderr = 0.0;
  double mean_deviation_norm = 0.0;
  double max_deviation_norm = 0.0;
  // Fraction of trials whose deviation norm exceeds the bound's total.
  double empirical_tail_at_bound = 0.0;
  // epsilon + 3 sqrt(epsilon (1 - epsilon) / n_trials)
  double tail_allowance = 0.0;
  BoundReport bound_report;
  std::size_t per_trial_eq3_violations = 0;
  // Trials where union-find connectivity disagrees with a_delta > 1e-8.
  std::size_t connectivity_crosscheck_mismatches = 0;

  bool passed() const {
    return per_trial_eq3_violations == 0 && empirical_tail_at_bound <= tail_allowance;
  }
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<TrialRecord> records;  // indexed by trial_index
};

// Runs config.trials independent realizations. Each trial is a pure function
// of (graph, profile, alpha, seed, trial_index) and the reduction walks the
// records in trial order, so the result does not depend on `threads`.
inline ExperimentResult run_experiment(const WeightedGraph& g, const SurvivalProfile& profile,
                                       const ExperimentConfig& config,
                                       std::size_t threads = default_thread_count()) {
  config.validate();
  require_matching(g, profile);

  const DeviationBound bound(g, profile);
  ExperimentResult result;
  ExperimentSummary& s = result.summary;
  if (config.alpha) {
    s.bound_report = bound.report(*config.alpha, config.epsilon);
  } else {
    s.bound_report = optimize_alpha(bound, config.epsilon, config.alpha_grid).report;
    s.alpha_optimized = true;
  }
  s.alpha = s.bound_report.alpha;

  const TrialContext ctx(g, profile, s.alpha);
  result.records.resize(config.trials);
  parallel_for(config.trials, threads, [&](std::size_t k) {
    result.records[k] = run_trial(ctx, config.seed, k);
  });

  s.n_trials = config.trials;
  std::size_t connected = 0;
  std::size_t above = 0;
  CompensatedSum dev_sum;
  for (const TrialRecord& r : result.records) {
    if (r.is_connected) ++connected;
    if (!r.eq3_holds()) ++s.per_trial_eq3_violations;
    const bool spectral_says =
        r.survivor_count <= 1 || r.a_delta > kConnectivityCrossCheckTol;
    if (spectral_says != r.is_connected) ++s.connectivity_crosscheck_mismatches;
    if (r.deviation_norm > s.bound_report.total) ++above;
    dev_sum.add(r.deviation_norm);
    s.max_deviation_norm = std::max(s.max_deviation_norm, r.deviation_norm);
  }
  const double n = static_cast<double>(config.trials);
  s.connected_fraction = static_cast<double>(connected) / n;
  s.connected_stderr = std::sqrt(s.connected_fraction * (1.0 - s.connected_fraction) / n);
  s.mean_deviation_norm = dev_sum.value() / n;
  s.empirical_tail_at_bound = static_cast<double>(above) / n;
  s.tail_allowance =
      config.epsilon + 3.0 * std::sqrt(config.epsilon * (1.0 - config.epsilon) / n);
  return result;
}

inline constexpr std::size_t kTrialCsvMaxRows = 1'000'000;

inline void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out,
                             std::size_t max_rows = kTrialCsvMaxRows) {
  out << "trial_index,pattern_bits,survivor_count,is_connected,a_delta,deviation_norm,"
         "lambda2_augmented,eq3_lower_bound\n";
  const std::size_t rows = std::min(records.size(), max_rows);
  for (std::size_t k = 0; k < rows; ++k) {
    const TrialRecord& r = records[k];
    std::string bits(r.sample.delta.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (r.sample.delta[i]) bits[i] = '1';
    out << r.sample.trial_index << ',' << bits << ',' << r.survivor_count << ','
        << (r.is_connected ? 1 : 0) << ',' << format_real(r.a_delta) << ','
        << format_real(r.deviation_norm) << ',' << format_real(r.lambda2_augmented) << ','
        << format_real(r.eq3_lower_bound) << '\n';
  }
  if (rows < records.size())
    out << "# truncated: " << rows << " of " << records.size() << " trials written\n";
}

}  // namespace percobound
