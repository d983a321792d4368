#pragma once

// Closed-form quantities of the site-percolation connectivity bound:
// Kearns-Saul sub-Gaussian constants, the deviation bound on the augmented
// Laplacian, the Bernoulli matrix-series tail, and the (n, d, lambda)
// connectivity thresholds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/graph.hpp"
#include "percobound/matrix.hpp"
#include "percobound/percolation.hpp"
#include "percobound/spectral.hpp"

namespace percobound {

// ---------------------------------------------------------------------------
// Kearns-Saul constant
// ---------------------------------------------------------------------------

inline constexpr double kKearnsSaulMax = 0.35355339059327376220;  // 1 / (2 sqrt 2)

// K(p) = (1/2) sqrt((1 - 2p) / log((1 - p) / p)), extended continuously to
// K(0) = K(1) = 0 and K(1/2) = 1 / (2 sqrt 2).
inline double kearns_saul_k(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("kearns_saul_k: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double x = 1.0 - 2.0 * p;
  double ratio;
  if (std::abs(p - 0.5) < 1e-6) {
    // x / (2 atanh x) = (1/2)(1 - x^2/3 + O(x^4))
    ratio = 0.5 * (1.0 - x * x / 3.0);
  } else {
    ratio = x / (std::log1p(-p) - std::log(p));
  }
  return 0.5 * std::sqrt(ratio);
}

// K(p)^2 given t = log(1 - p). Stays accurate when 1 - p is far below the
// resolution of p itself; t = -infinity means p = 1.
inline double kearns_saul_k2_from_log_q(double t) {
  if (!(t <= 0.0)) throw DomainError("log(1 - p) must be <= 0");
  const double q = std::exp(t);
  if (q > 1e-3) {
    const double k = kearns_saul_k(1.0 - q);
    return k * k;
  }
  if (t == -std::numeric_limits<double>::infinity()) return 0.0;
  return (1.0 - 2.0 * q) / (4.0 * (std::log1p(-q) - t));
}

inline void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Deviation bound on the augmented Laplacian
// ---------------------------------------------------------------------------

struct BoundReport {
  double epsilon = 0.0;
  double alpha = 0.0;
  double k_bar = 0.0;
  double sigma = 0.0;
  double sigma2 = 0.0;
  double term_kbar = 0.0;            // 2 K_bar sqrt(log(4n/eps))
  double term_alpha_mismatch = 0.0;  // max_i |alpha - sum_j p_j w_ij|
  double term_dad = 0.0;             // ||D_v^{1/2} A D_v^{1/2}||, v = p(1-p)
  double term_dpad = 0.0;            // 2 ||D_p A D_v^{1/2}||
  double term_sigma = 0.0;           // (9/2) sqrt(sigma log(4n/eps)^{1/2})
  double total = 0.0;
  double lambda2_expected = 0.0;
  double a_lower_bound = 0.0;  // min{lambda2_expected - total, alpha}
};

// The alpha- and epsilon-independent parts of the bound for one (graph,
// profile) pair. Building it costs a handful of eigendecompositions; each
// report() then costs one more.
class DeviationBound {
 public:
  DeviationBound(const WeightedGraph& g, const SurvivalProfile& profile)
      : g_(g), profile_(profile) {
    require_matching(g_, profile_);
    const std::size_t n = g_.n();
    const Matrix a = build_adjacency(g_);

    k_.resize(n);
    for (std::size_t i = 0; i < n; ++i) k_[i] = kearns_saul_k(profile_[i]);

    // K_bar = max_i (sum_j w_ij^2 K_j^2)^{1/2}
    std::vector<double> row(n, 0.0);
    for (const Edge& e : g_.edges()) {
      row[e.i] += e.w * e.w * k_[e.j] * k_[e.j];
      row[e.j] += e.w * e.w * k_[e.i] * k_[e.i];
    }
    k_bar_ = std::sqrt(*std::max_element(row.begin(), row.end()));

    // sigma^2 = ||sum_i K_i^2 (1-2p_i)^2 (a_i a_i^T)^2|| with
    // (a_i a_i^T)^2 = ||a_i||^2 a_i a_i^T, i.e. ||A diag(c) A||.
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double col2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) col2 += a(j, i) * a(j, i);
      const double s = 1.0 - 2.0 * profile_[i];
      c[i] = k_[i] * k_[i] * s * s * col2;
    }
    const std::vector<double> ones(n, 1.0);
    sigma2_ = spectral_norm(a * scale_rows_cols(a, c, ones));

    std::vector<double> root_var(n);
    for (std::size_t i = 0; i < n; ++i)
      root_var[i] = std::sqrt(profile_[i] * (1.0 - profile_[i]));
    term_dad_ = spectral_norm(scale_rows_cols(a, root_var, root_var));
    term_dpad_ = 2.0 * operator_norm(scale_rows_cols(a, profile_.values(), root_var));

    expected_degree_.assign(n, 0.0);
    for (const Edge& e : g_.edges()) {
      expected_degree_[e.i] += profile_[e.j] * e.w;
      expected_degree_[e.j] += profile_[e.i] * e.w;
    }
  }

  const WeightedGraph& graph() const { return g_; }
  const SurvivalProfile& profile() const { return profile_; }
  std::span<const double> k() const { return k_; }
  double sigma2() const { return sigma2_; }
  double k_bar() const { return k_bar_; }
  // sum_j p_j w_ij for each row i.
  std::span<const double> expected_degree() const { return expected_degree_; }

  BoundReport report(double alpha, double epsilon) const {
    require_alpha(alpha);
    require_epsilon(epsilon);
    const double log_term = std::log(4.0 * static_cast<double>(g_.n()) / epsilon);

    BoundReport r;
    r.epsilon = epsilon;
    r.alpha = alpha;
    r.k_bar = k_bar_;
    r.sigma2 = sigma2_;
    r.sigma = std::sqrt(sigma2_);
    r.term_kbar = 2.0 * k_bar_ * std::sqrt(log_term);
    for (double deg : expected_degree_)
      r.term_alpha_mismatch = std::max(r.term_alpha_mismatch, std::abs(alpha - deg));
    r.term_dad = term_dad_;
    r.term_dpad = term_dpad_;
    r.term_sigma = 4.5 * std::sqrt(r.sigma * std::sqrt(log_term));
    r.total = r.term_kbar + r.term_alpha_mismatch + r.term_dad + r.term_dpad + r.term_sigma;

    const Matrix expected = expected_augmented_laplacian(g_, profile_, alpha);
    r.lambda2_expected = g_.n() >= 2 ? lambda2(expected) : expected(0, 0);
    r.a_lower_bound = std::min(r.lambda2_expected - r.total, alpha);
    return r;
  }

 private:
  WeightedGraph g_;
  SurvivalProfile profile_;
  std::vector<double> k_;
  std::vector<double> expected_degree_;
  double k_bar_ = 0.0;
  double sigma2_ = 0.0;
  double term_dad_ = 0.0;
  double term_dpad_ = 0.0;
};

inline BoundReport theorem1_bound(const WeightedGraph& g, const SurvivalProfile& profile,
                                  double alpha, double epsilon) {
  require_epsilon(epsilon);
  require_alpha(alpha);
  return DeviationBound(g, profile).report(alpha, epsilon);
}

// ---------------------------------------------------------------------------
// Bernoulli matrix series
// ---------------------------------------------------------------------------

// P(||sum_i (delta_i - p_i) X_i|| >= t) <= min(1, 2N exp(-t^2 / (4 sigma^2))).
inline double proposition1_tail(double sigma2, std::size_t dim, double t) {
  if (!(t > 0.0)) throw DomainError("proposition1_tail: t must be > 0");
  if (!(sigma2 >= 0.0)) throw DomainError("proposition1_tail: sigma^2 must be >= 0");
  if (dim < 1) throw DomainError("proposition1_tail: N must be >= 1");
  if (sigma2 == 0.0) return 0.0;
  return std::min(1.0, 2.0 * static_cast<double>(dim) * std::exp(-t * t / (4.0 * sigma2)));
}

inline void require_series(std::span<const Matrix> xs, std::size_t profile_size) {
  if (xs.empty()) throw ContractViolation("matrix series must be non-empty");
  if (xs.size() != profile_size)
    throw ContractViolation("matrix series length does not match profile length");
  const std::size_t dim = xs.front().size();
  for (const Matrix& x : xs) {
    if (x.size() != dim) throw ContractViolation("matrix series has mixed dimensions");
    if (x.asymmetry() > 1e-10 * x.max_abs())
      throw ContractViolation("matrix series entries must be symmetric");
  }
}

// sigma^2 = ||sum_i K(p_i)^2 X_i^2||.
inline double proposition1_sigma2(std::span<const Matrix> xs, const SurvivalProfile& profile) {
  require_series(xs, profile.size());
  Matrix acc(xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double k = kearns_saul_k(profile[i]);
    acc += (xs[i] * xs[i]) * (k * k);
  }
  return spectral_norm(acc);
}

// ---------------------------------------------------------------------------
// Choice of alpha
// ---------------------------------------------------------------------------

struct AlphaOptimum {
  double alpha_star = 0.0;
  BoundReport report;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kDefaultAlphaGrid = 256;

// Maximizes a_lower_bound over alpha. Candidates: an evenly spaced grid on
// [0, 2 max_i sum_j p_j w_ij], the mean expected degree, then a second grid of
// the same size on the bracket around the best grid point. Ties go to the
// smallest alpha.
inline AlphaOptimum optimize_alpha(const DeviationBound& bound, double epsilon,
                                   std::size_t grid_size = kDefaultAlphaGrid) {
  if (grid_size < 2) throw ParameterError("alpha grid needs at least 2 points");
  require_epsilon(epsilon);
  const auto deg = bound.expected_degree();
  const double hi = 2.0 * *std::max_element(deg.begin(), deg.end());
  double mean = 0.0;
  for (double x : deg) mean += x;
  mean /= static_cast<double>(deg.size());

  AlphaOptimum best;
  bool have = false;
  auto consider = [&](double alpha) {
    const BoundReport r = bound.report(alpha, epsilon);
    ++best.evaluations;
    const bool better = r.a_lower_bound > best.report.a_lower_bound ||
                        (r.a_lower_bound == best.report.a_lower_bound && alpha < best.alpha_star);
    if (!have || better) {
      best.alpha_star = alpha;
      best.report = r;
      have = true;
    }
  };

  const double step = hi / static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) consider(step * static_cast<double>(k));
  consider(mean);

  if (step > 0.0) {
    const double lo_r = std::max(0.0, best.alpha_star - step);
    const double hi_r = best.alpha_star + step;
    const double fine = (hi_r - lo_r) / static_cast<double>(grid_size - 1);
    for (std::size_t k = 0; k < grid_size; ++k) consider(lo_r + fine * static_cast<double>(k));
  }
  return best;
}

inline AlphaOptimum optimize_alpha(const WeightedGraph& g, const SurvivalProfile& profile,
                                   double epsilon, std::size_t grid_size = kDefaultAlphaGrid) {
  return optimize_alpha(DeviationBound(g, profile), epsilon, grid_size);
}

// ---------------------------------------------------------------------------
// (n, d, lambda)-graphs
// ---------------------------------------------------------------------------

inline void require_ndl(double n, double d, double lambda) {
  if (!(n >= 1.0)) throw DomainError("n must be >= 1");
  if (!(d > 0.0)) throw DomainError("d must be > 0");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
}

// Lower bound p d - p^2 lambda on lambda_2 of the expected augmented Laplacian
// at alpha = p d.
inline double expected_lambda2_regular(double n, double d, double lambda, double p) {
  require_ndl(n, d, lambda);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (lambda > d) throw DomainError("lambda must not exceed d");
  return p * d - p * p * lambda;
}

struct Inequality5Result {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace detail {

inline void require_gap(double d, double lambda) {
  if (!(lambda < d))
    throw DomainError("lambda must be strictly below d (lambda = d: disconnected or bipartite)");
}

// (1 - lambda/d) p > 2 (L K^2/d)^{1/2} + 2 sqrt(p(1-p)) + (9/(2p)) sqrt|1-2p| (L K^2/d)^{1/4}
// with L = log(4n/eps), evaluated from t = log(1 - p).
inline Inequality5Result inequality5_at_log_q(double n, double d, double lambda, double t,
                                              double epsilon) {
  const double q = std::exp(t);
  const double p = -std::expm1(t);
  const double k2 = kearns_saul_k2_from_log_q(t);
  const double r = std::log(4.0 * n / epsilon) / d * k2;
  const double root_pq = std::exp(0.5 * (t + std::log1p(-q)));
  Inequality5Result out;
  out.lhs = (1.0 - lambda / d) * p;
  out.rhs = 2.0 * std::sqrt(r) + 2.0 * root_pq +
            9.0 / (2.0 * p) * std::sqrt(std::abs(1.0 - 2.0 * p)) * std::pow(r, 0.25);
  out.holds = out.lhs > out.rhs;
  return out;
}

}  // namespace detail

inline Inequality5Result check_inequality5(double n, double d, double lambda, double p,
                                           double epsilon) {
  require_ndl(n, d, lambda);
  require_epsilon(epsilon);
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("check_inequality5: p must lie in (0, 1]");
  detail::require_gap(d, lambda);
  return detail::inequality5_at_log_q(n, d, lambda, std::log1p(-p), epsilon);
}

// Same check with the survival probability given as t = log(1 - p).
inline Inequality5Result check_inequality5_log_q(double n, double d, double lambda, double t,
                                                 double epsilon) {
  require_ndl(n, d, lambda);
  require_epsilon(epsilon);
  if (!(t < 0.0)) throw DomainError("log(1 - p) must be < 0 (p > 0)");
  detail::require_gap(d, lambda);
  return detail::inequality5_at_log_q(n, d, lambda, t, epsilon);
}

struct CorollaryConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double log_c1 = 0.0;  // c1 underflows for lambda/d close to 1
};

// C1 = exp(-8 (1 - r)^{-2} (3 - r)^2), C2 = 81^2 (1 - r)^{-4}, r = lambda/d.
inline CorollaryConstants corollary_constants(double lambda_over_d) {
  const double r = lambda_over_d;
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("corollary_constants: lambda/d must lie in [0, 1)");
  const double gap = 1.0 - r;
  CorollaryConstants c;
  c.log_c1 = -8.0 * (3.0 - r) * (3.0 - r) / (gap * gap);
  c.c1 = std::exp(c.log_c1);
  c.c2 = 6561.0 / (gap * gap * gap * gap);
  return c;
}

enum class ThresholdMode { kCorollary, kInequality5 };

inline std::string_view to_string(ThresholdMode m) {
  return m == ThresholdMode::kCorollary ? "corollary" : "inequality5";
}

inline ThresholdMode threshold_mode_from_string(std::string_view s) {
  if (s == "corollary") return ThresholdMode::kCorollary;
  if (s == "inequality5") return ThresholdMode::kInequality5;
  throw ParameterError("unknown threshold mode '" + std::string(s) + "'");
}

struct ThresholdReport {
  double n = 0.0;
  double d = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  ThresholdMode mode = ThresholdMode::kCorollary;
  double c1 = 0.0;
  double c2 = 0.0;
  double log_c1 = 0.0;
  // -log(c1) + c2 log(4n/eps) / d, the corollary's requirement on beta^4
  // where p = 1 - exp(-beta^4).
  double beta4_min = 0.0;
  // Survival threshold, clamped to [0, 1).
  double p_threshold = 0.0;
  // log(1 - p) at the threshold, exact even when p_threshold rounds to 1.
  double log_one_minus_p = 0.0;
  // 1 - p_threshold is below double resolution.
  bool vacuous = false;
  // inequality5 mode: sweep points above the threshold where the inequality
  // failed again.
  std::size_t monotone_violations = 0;
};

inline constexpr std::size_t kThresholdSweepPoints = 1000;
inline constexpr double kThresholdBisectionTol = 1e-12;

namespace detail {

inline void finish_threshold(ThresholdReport& r) {
  const double below_one = std::nextafter(1.0, 0.0);
  const double p = -std::expm1(r.log_one_minus_p);
  r.vacuous = !(p < 1.0) || r.log_one_minus_p < std::log(0x1.0p-53);
  r.p_threshold = std::clamp(p, 0.0, below_one);
}

// Smallest p with inequality (5) holding, searched as t = log(1 - p) in
// [t_lo, log(1/2)]; the inequality never holds for p <= 1/2.
inline double inequality5_log_threshold(double n, double d, double lambda, double epsilon) {
  const double t_fail = std::log(0.5);
  double t_hold = -1.0;
  while (!inequality5_at_log_q(n, d, lambda, t_hold, epsilon).holds) {
    t_hold *= 2.0;
    if (!std::isfinite(t_hold)) return -std::numeric_limits<double>::infinity();
  }
  double lo = t_hold;  // holds
  double hi = t_fail;  // fails
  while (hi - lo > kThresholdBisectionTol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (inequality5_at_log_q(n, d, lambda, mid, epsilon).holds)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

inline ThresholdReport survival_threshold(double n, double d, double lambda, double epsilon,
                                          ThresholdMode mode) {
  require_ndl(n, d, lambda);
  require_epsilon(epsilon);
  detail::require_gap(d, lambda);

  ThresholdReport r;
  r.n = n;
  r.d = d;
  r.lambda = lambda;
  r.epsilon = epsilon;
  r.mode = mode;
  const CorollaryConstants c = corollary_constants(lambda / d);
  r.c1 = c.c1;
  r.c2 = c.c2;
  r.log_c1 = c.log_c1;
  r.beta4_min = -c.log_c1 + c.c2 * std::log(4.0 * n / epsilon) / d;

  if (mode == ThresholdMode::kCorollary) {
    r.log_one_minus_p = -r.beta4_min;
  } else {
    const double t_star = detail::inequality5_log_threshold(n, d, lambda, epsilon);
    r.log_one_minus_p = t_star;
    // Re-check every p' above the threshold on two sweeps: evenly in p up to
    // 1, and evenly in log(1 - p) down to ten times the threshold exponent.
    const double p_star = -std::expm1(t_star);
    for (std::size_t k = 1; k <= kThresholdSweepPoints / 2; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(kThresholdSweepPoints / 2);
      const double p = p_star + (1.0 - p_star) * frac;
      if (p < 1.0 && p > p_star && !detail::inequality5_at_log_q(n, d, lambda, std::log1p(-p), epsilon).holds)
        ++r.monotone_violations;
      const double t = t_star * (1.0 + 9.0 * frac);
      if (std::isfinite(t) && !detail::inequality5_at_log_q(n, d, lambda, t, epsilon).holds)
        ++r.monotone_violations;
    }
  }
  detail::finish_threshold(r);
  return r;
}

}  // namespace percobound
