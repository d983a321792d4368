#pragma once

// Exhaustive enumeration of all deletion patterns for small graphs. These are
// the exact laws the probabilistic bounds are checked against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/graph.hpp"
#include "percobound/matrix.hpp"
#include "percobound/parallel.hpp"
#include "percobound/percolation.hpp"
#include "percobound/spectral.hpp"

namespace percobound {

inline constexpr std::size_t kOracleMaxVertices = 20;

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

enum class StatisticKind { kDeviationNorm, kADelta, kConnectivityIndicator };

inline std::string_view to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::kDeviationNorm: return "deviation_norm";
    case StatisticKind::kADelta: return "a_delta";
    case StatisticKind::kConnectivityIndicator: return "connectivity_indicator";
  }
  return "unknown";
}

inline StatisticKind statistic_kind_from_string(std::string_view s) {
  if (s == "deviation_norm") return StatisticKind::kDeviationNorm;
  if (s == "a_delta") return StatisticKind::kADelta;
  if (s == "connectivity_indicator" || s == "connectivity") return StatisticKind::kConnectivityIndicator;
  throw ParameterError("unknown statistic kind '" + std::string(s) + "'");
}

struct DistributionEntry {
  std::uint64_t pattern = 0;  // bit i set: vertex i survives
  double probability = 0.0;
  double statistic = 0.0;
};

// Patterns of probability zero (a vertex with p_i in {0, 1} taking its
// impossible value) are omitted; the remaining entries are in ascending
// pattern order.
struct ExactDistribution {
  std::size_t n = 0;
  StatisticKind kind = StatisticKind::kDeviationNorm;
  std::vector<DistributionEntry> entries;
  double total_probability = 0.0;
};

namespace detail {

inline void require_enumerable(std::size_t n) {
  if (n > kOracleMaxVertices)
    throw SizeError("exhaustive enumeration is limited to n <= " +
                    std::to_string(kOracleMaxVertices) + " (got " + std::to_string(n) + ")");
}

// Every pattern with non-zero probability, ascending. Vertices with p in
// (0, 1) vary; the rest are pinned.
inline std::vector<std::uint64_t> support_patterns(std::span<const double> p) {
  std::uint64_t base = 0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 1.0)
      base |= std::uint64_t{1} << i;
    else if (p[i] > 0.0)
      free.push_back(i);
  }
  std::vector<std::uint64_t> out(std::size_t{1} << free.size());
  for (std::uint64_t k = 0; k < out.size(); ++k) {
    std::uint64_t mask = base;
    for (std::size_t b = 0; b < free.size(); ++b)
      if ((k >> b) & 1u) mask |= std::uint64_t{1} << free[b];
    out[k] = mask;
  }
  return out;
}

inline double pattern_probability(std::span<const double> p, std::uint64_t mask) {
  double prob = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) prob *= ((mask >> i) & 1u) ? p[i] : 1.0 - p[i];
  return prob;
}

}  // namespace detail

inline ExactDistribution exact_distribution(const WeightedGraph& g, const SurvivalProfile& profile,
                                            double alpha, StatisticKind kind,
                                            std::size_t threads = default_thread_count()) {
  detail::require_enumerable(g.n());
  require_matching(g, profile);
  const TrialContext ctx(g, profile, alpha);
  const std::vector<std::uint64_t> patterns = detail::support_patterns(profile.values());

  ExactDistribution dist;
  dist.n = g.n();
  dist.kind = kind;
  dist.entries.resize(patterns.size());
  parallel_for(patterns.size(), threads, [&](std::size_t k) {
    const std::uint64_t mask = patterns[k];
    const PercolationSample s = PercolationSample::from_mask(g.n(), mask);
    DistributionEntry& e = dist.entries[k];
    e.pattern = mask;
    e.probability = detail::pattern_probability(profile.values(), mask);
    switch (kind) {
      case StatisticKind::kDeviationNorm:
        e.statistic = spectral_norm(augmented_laplacian(g, s, alpha) - ctx.expected);
        break;
      case StatisticKind::kADelta:
        e.statistic = algebraic_connectivity_survivors(g, s);
        break;
      case StatisticKind::kConnectivityIndicator:
        e.statistic = survivor_connectivity(g, s).is_connected ? 1.0 : 0.0;
        break;
    }
  });

  CompensatedSum total;
  for (const auto& e : dist.entries) total.add(e.probability);
  dist.total_probability = total.value();
  return dist;
}

// Rounding in the pattern products can push a full sum one ulp past 1.
inline double clamp_probability(double x) { return std::clamp(x, 0.0, 1.0); }

// P(statistic > t).
inline double exact_tail(const ExactDistribution& dist, double t) {
  CompensatedSum s;
  for (const auto& e : dist.entries)
    if (e.statistic > t) s.add(e.probability);
  return clamp_probability(s.value());
}

inline double exact_mean(const ExactDistribution& dist) {
  CompensatedSum s;
  for (const auto& e : dist.entries) s.add(e.probability * e.statistic);
  return s.value();
}

// Law of ||sum_i (delta_i - p_i) X_i|| over all Bernoulli patterns.
struct SeriesNormDistribution {
  std::size_t dim = 0;
  std::vector<DistributionEntry> entries;

  // P(norm >= t).
  double tail(double t) const {
    CompensatedSum s;
    for (const auto& e : entries)
      if (e.statistic >= t) s.add(e.probability);
    return clamp_probability(s.value());
  }
};

inline SeriesNormDistribution bernoulli_series_distribution(std::span<const Matrix> xs,
                                                            const SurvivalProfile& profile) {
  detail::require_enumerable(xs.size());
  if (xs.empty() || xs.size() != profile.size())
    throw ContractViolation("matrix series length does not match profile length");
  const std::size_t dim = xs.front().size();
  for (const Matrix& x : xs)
    if (x.size() != dim) throw ContractViolation("matrix series has mixed dimensions");

  SeriesNormDistribution out;
  out.dim = dim;
  for (std::uint64_t mask : detail::support_patterns(profile.values())) {
    Matrix sum(dim);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double coeff = (((mask >> i) & 1u) ? 1.0 : 0.0) - profile[i];
      if (coeff != 0.0) sum += xs[i] * coeff;
    }
    out.entries.push_back(
        {mask, detail::pattern_probability(profile.values(), mask), spectral_norm(sum)});
  }
  return out;
}

// Exact P(||sum_i (delta_i - p_i) X_i|| >= t).
inline double exact_bernoulli_series_tail(std::span<const Matrix> xs,
                                          const SurvivalProfile& profile, double t) {
  return bernoulli_series_distribution(xs, profile).tail(t);
}

inline std::string pattern_bits(std::uint64_t mask, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1u) s[i] = '1';
  return s;
}

inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// pattern_bits,probability,statistic -- vertex 0 is the first character.
inline void write_distribution_csv(const ExactDistribution& dist, std::ostream& out) {
  out << "pattern_bits,probability,statistic\n";
  for (const auto& e : dist.entries)
    out << pattern_bits(e.pattern, dist.n) << ',' << format_real(e.probability) << ','
        << format_real(e.statistic) << '\n';
}

}  // namespace percobound
