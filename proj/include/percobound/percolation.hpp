#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/graph.hpp"
#include "percobound/matrix.hpp"
#include "percobound/philox.hpp"
#include "percobound/spectral.hpp"

namespace percobound {

// Per-vertex survival probabilities p_i in [0, 1].
class SurvivalProfile {
 public:
  explicit SurvivalProfile(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ParameterError("survival profile must be non-empty");
    for (double x : p_)
      if (!(x >= 0.0 && x <= 1.0)) throw DomainError("survival probabilities must lie in [0, 1]");
  }

  static SurvivalProfile uniform(std::size_t n, double p) {
    return SurvivalProfile(std::vector<double>(n, p));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

  // p_i (1 - p_i), the Bernoulli variances.
  std::vector<double> variances() const {
    std::vector<double> v(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) v[i] = p_[i] * (1.0 - p_[i]);
    return v;
  }

  bool is_uniform() const {
    return std::all_of(p_.begin(), p_.end(), [&](double x) { return x == p_.front(); });
  }

  friend bool operator==(const SurvivalProfile&, const SurvivalProfile&) = default;

 private:
  std::vector<double> p_;
};

inline void require_matching(const WeightedGraph& g, const SurvivalProfile& profile) {
  if (g.n() != profile.size())
    throw ContractViolation("survival profile length does not match graph size");
}

struct PercolationSample {
  std::vector<bool> delta;  // delta[i] == true: vertex i survives
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;

  std::size_t survivor_count() const {
    return static_cast<std::size_t>(std::count(delta.begin(), delta.end(), true));
  }

  // Bit i of mask is delta_i.
  static PercolationSample from_mask(std::size_t n, std::uint64_t mask) {
    PercolationSample s;
    s.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.delta[i] = ((mask >> i) & 1u) != 0;
    s.trial_index = mask;
    return s;
  }

  friend bool operator==(const PercolationSample&, const PercolationSample&) = default;
};

// delta_i = [u_i < p_i] with u_i drawn from the counter-based stream
// addressed by (seed, trial_index, i).
inline PercolationSample sample(const SurvivalProfile& profile, std::uint64_t seed,
                                std::uint64_t trial_index) {
  PercolationSample s;
  s.seed = seed;
  s.trial_index = trial_index;
  s.delta.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double u = bits_to_unit(
        counter_bits(seed, StreamTag::kPercolation, trial_index, static_cast<std::uint32_t>(i)));
    s.delta[i] = u < profile[i];
  }
  return s;
}

inline void require_matching(const WeightedGraph& g, const PercolationSample& s) {
  if (g.n() != s.delta.size())
    throw ContractViolation("percolation sample length does not match graph size");
}

// Laplacian of the survivors, kept n x n with zero rows for deleted vertices.
inline Matrix percolated_laplacian(const WeightedGraph& g, const PercolationSample& s) {
  require_matching(g, s);
  Matrix l(g.n());
  for (const Edge& e : g.edges()) {
    if (!s.delta[e.i] || !s.delta[e.j]) continue;
    l(e.i, e.i) += e.w;
    l(e.j, e.j) += e.w;
    l(e.i, e.j) -= e.w;
    l(e.j, e.i) -= e.w;
  }
  return l;
}

inline void require_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ParameterError("alpha must be a finite value >= 0");
}

// L_delta + alpha * sum_{i deleted} e_i e_i^T.
inline Matrix augmented_laplacian(const WeightedGraph& g, const PercolationSample& s,
                                  double alpha) {
  require_alpha(alpha);
  Matrix l = percolated_laplacian(g, s);
  for (std::size_t i = 0; i < g.n(); ++i)
    if (!s.delta[i]) l(i, i) += alpha;
  return l;
}

// E[augmented Laplacian] = sum_{i<j} p_i p_j w_ij (e_i - e_j)(e_i - e_j)^T
//                          + alpha * sum_i (1 - p_i) e_i e_i^T.
inline Matrix expected_augmented_laplacian(const WeightedGraph& g, const SurvivalProfile& profile,
                                           double alpha) {
  require_alpha(alpha);
  require_matching(g, profile);
  Matrix l(g.n());
  for (const Edge& e : g.edges()) {
    const double w = profile[e.i] * profile[e.j] * e.w;
    l(e.i, e.i) += w;
    l(e.j, e.j) += w;
    l(e.i, e.j) -= w;
    l(e.j, e.i) -= w;
  }
  for (std::size_t i = 0; i < g.n(); ++i) l(i, i) += alpha * (1.0 - profile[i]);
  return l;
}

struct SurvivorConnectivity {
  std::size_t survivor_count = 0;
  bool is_connected = true;  // vacuously true for <= 1 survivor
};

inline SurvivorConnectivity survivor_connectivity(const WeightedGraph& g,
                                                  const PercolationSample& s) {
  require_matching(g, s);
  const std::size_t m = s.survivor_count();
  if (m <= 1) return {m, true};
  DisjointSets ds(g.n());
  std::size_t components = m;
  for (const Edge& e : g.edges())
    if (s.delta[e.i] && s.delta[e.j] && ds.unite(e.i, e.j)) --components;
  return {m, components == 1};
}

inline std::vector<std::size_t> survivors(const PercolationSample& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.delta.size(); ++i)
    if (s.delta[i]) out.push_back(i);
  return out;
}

// a_delta: lambda_2 of the survivor subgraph's own Laplacian; +infinity when
// fewer than two vertices survive.
inline double algebraic_connectivity_survivors(const WeightedGraph& g,
                                               const PercolationSample& s) {
  require_matching(g, s);
  const std::vector<std::size_t> keep = survivors(s);
  if (keep.size() <= 1) return std::numeric_limits<double>::infinity();
  return lambda2(build_laplacian(induced_subgraph(g, keep)));
}

inline constexpr double kConnectivityCrossCheckTol = 1e-8;
inline constexpr double kEq3Slack = 1e-8;

// Everything about a realization that does not depend on the realization.
struct TrialContext {
  TrialContext(const WeightedGraph& graph, const SurvivalProfile& prof, double a)
      : g(graph), profile(prof), alpha(a) {
    require_alpha(alpha);
    require_matching(g, profile);
    expected = expected_augmented_laplacian(g, profile, alpha);
    lambda2_expected = g.n() >= 2 ? lambda2(expected) : expected(0, 0);
  }

  WeightedGraph g;
  SurvivalProfile profile;
  double alpha;
  Matrix expected;
  double lambda2_expected;
};

struct TrialRecord {
  PercolationSample sample;
  std::size_t survivor_count = 0;
  bool is_connected = true;
  double a_delta = std::numeric_limits<double>::infinity();
  double deviation_norm = 0.0;  // ||augmented - E augmented||
  double lambda2_augmented = 0.0;
  // min{lambda_2(E augmented) - deviation_norm, alpha}
  double eq3_lower_bound = 0.0;

  // Per-realization Weyl bound a_delta >= eq3_lower_bound, with slack.
  bool eq3_holds() const { return a_delta >= eq3_lower_bound - kEq3Slack; }

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline TrialRecord evaluate_sample(const TrialContext& ctx, PercolationSample s) {
  TrialRecord r;
  const SurvivorConnectivity conn = survivor_connectivity(ctx.g, s);
  r.survivor_count = conn.survivor_count;
  r.is_connected = conn.is_connected;
  r.a_delta = algebraic_connectivity_survivors(ctx.g, s);

  const Matrix aug = augmented_laplacian(ctx.g, s, ctx.alpha);
  const SpectralResult aug_spec = eig_sym(aug);
  r.lambda2_augmented = aug.size() >= 2 ? lambda2(aug_spec) : aug_spec.eigenvalues[0];
  r.deviation_norm = spectral_norm(aug - ctx.expected);
  r.eq3_lower_bound = std::min(ctx.lambda2_expected - r.deviation_norm, ctx.alpha);
  r.sample = std::move(s);
  return r;
}

inline TrialRecord run_trial(const TrialContext& ctx, std::uint64_t seed,
                             std::uint64_t trial_index) {
  return evaluate_sample(ctx, sample(ctx.profile, seed, trial_index));
}

inline TrialRecord run_trial(const WeightedGraph& g, const SurvivalProfile& profile, double alpha,
                             std::uint64_t seed, std::uint64_t trial_index) {
  return run_trial(TrialContext(g, profile, alpha), seed, trial_index);
}

}  // namespace percobound
