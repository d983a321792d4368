#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "percobound/graph.hpp"
#include "percobound/spectral.hpp"

namespace percobound {

// (n, d, lambda) certificate of an unweighted graph. `d`, `lambda` and
// `lambda_over_d` are set only when the graph is regular with unit weights.
struct RegularityCertificate {
  std::size_t n = 0;
  bool is_regular = false;
  std::optional<double> d;
  std::optional<double> lambda;
  std::optional<double> lambda_over_d;
  bool is_connected = false;
  bool is_bipartite = false;
  // lambda == d: the graph is disconnected or bipartite and no Corollary-type
  // statement applies to it.
  bool lambda_equals_d = false;
};

inline constexpr double kDegreeTolerance = 1e-9;

inline RegularityCertificate certify_ndl(const WeightedGraph& g, double tol = kDegreeTolerance) {
  RegularityCertificate cert;
  cert.n = g.n();
  cert.is_connected = is_connected(g);
  cert.is_bipartite = is_bipartite(g);

  for (const Edge& e : g.edges())
    if (e.w != 1.0) return cert;
  const std::vector<double> deg = weighted_degrees(g);
  const double d = deg.front();
  for (double x : deg)
    if (std::abs(x - d) > tol) return cert;

  cert.is_regular = true;
  cert.d = d;

  // Drop one copy of the Perron eigenvalue d (the largest); lambda is the
  // largest magnitude among the rest.
  const SpectralResult spec = eig_sym(build_adjacency(g));
  double lambda = 0.0;
  for (std::size_t k = 0; k + 1 < spec.eigenvalues.size(); ++k)
    lambda = std::max(lambda, std::abs(spec.eigenvalues[k]));
  lambda = std::min(lambda, d);

  // A regular graph attains lambda = d exactly when it is disconnected or has
  // a bipartite component; the combinatorial checks decide, not the spectrum.
  cert.lambda_equals_d = g.n() > 1 && (!cert.is_connected || cert.is_bipartite);
  if (cert.lambda_equals_d) lambda = d;
  cert.lambda = lambda;
  if (d > 0.0) cert.lambda_over_d = lambda / d;
  return cert;
}

}  // namespace percobound
