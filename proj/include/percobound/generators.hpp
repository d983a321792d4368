#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/graph.hpp"
#include "percobound/philox.hpp"

namespace percobound {

enum class GraphFamily { kComplete, kCycle, kPath, kHypercube, kPaley, kRandomRegular, kPetersen, kStar };

inline std::string_view to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::kComplete: return "complete";
    case GraphFamily::kCycle: return "cycle";
    case GraphFamily::kPath: return "path";
    case GraphFamily::kHypercube: return "hypercube";
    case GraphFamily::kPaley: return "paley";
    case GraphFamily::kRandomRegular: return "random_regular";
    case GraphFamily::kPetersen: return "petersen";
    case GraphFamily::kStar: return "star";
  }
  return "unknown";
}

inline GraphFamily family_from_string(std::string_view name) {
  for (GraphFamily f : {GraphFamily::kComplete, GraphFamily::kCycle, GraphFamily::kPath,
                        GraphFamily::kHypercube, GraphFamily::kPaley, GraphFamily::kRandomRegular,
                        GraphFamily::kPetersen, GraphFamily::kStar})
    if (to_string(f) == name) return f;
  throw ParameterError("unknown graph family '" + std::string(name) + "'");
}

// Family-specific integers. Unused fields are ignored.
struct GeneratorSpec {
  GraphFamily family = GraphFamily::kComplete;
  std::size_t n = 0;  // complete, cycle, path, random_regular, star (leaves + 1)
  std::size_t k = 0;  // hypercube dimension
  std::size_t q = 0;  // paley order
  std::size_t d = 0;  // random_regular degree
};

inline WeightedGraph complete_graph(std::size_t n) {
  if (n < 1) throw ParameterError("complete: n must be >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph path_graph(std::size_t n) {
  if (n < 1) throw ParameterError("path: n must be >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

// C_1 and C_2 degenerate to the path on the same vertices.
inline WeightedGraph cycle_graph(std::size_t n) {
  if (n < 1) throw ParameterError("cycle: n must be >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  if (n >= 3) edges.push_back({0, n - 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph hypercube_graph(std::size_t k) {
  if (k < 1 || k > 16) throw ParameterError("hypercube: dimension must be in [1, 16]");
  const std::size_t n = std::size_t{1} << k;
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t u = v ^ (std::size_t{1} << b);
      if (v < u) edges.push_back({v, u, 1.0});
    }
  return WeightedGraph(n, std::move(edges));
}

inline bool is_prime(std::size_t q) {
  if (q < 2) return false;
  for (std::size_t f = 2; f * f <= q; ++f)
    if (q % f == 0) return false;
  return true;
}

// Vertices are GF(q); i ~ j iff i - j is a non-zero square.
inline WeightedGraph paley_graph(std::size_t q) {
  if (!is_prime(q) || q % 4 != 1)
    throw ParameterError("paley: q must be a prime congruent to 1 mod 4");
  std::vector<bool> square(q, false);
  for (std::size_t x = 1; x < q; ++x) square[(x * x) % q] = true;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j)
      if (square[j - i]) edges.push_back({i, j, 1.0});
  return WeightedGraph(q, std::move(edges));
}

inline WeightedGraph petersen_graph() {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});
    edges.push_back({i, i + 5, 1.0});
    edges.push_back({i + 5, (i + 2) % 5 + 5, 1.0});
  }
  return WeightedGraph(10, std::move(edges));
}

// K_{1,n-1} with centre 0.
inline WeightedGraph star_graph(std::size_t n) {
  if (n < 1) throw ParameterError("star: n must be >= 1");
  std::vector<Edge> edges;
  for (std::size_t j = 1; j < n; ++j) edges.push_back({0, j, 1.0});
  return WeightedGraph(n, std::move(edges));
}

inline constexpr std::size_t kRandomRegularMaxAttempts = 1'000'000;

// Pairing model: stubs are matched uniformly at random; a pairing that would
// create a loop or a repeated edge is redrawn, and a dead end (no admissible
// pair among the remaining stubs) restarts the whole matching.
inline WeightedGraph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1) throw ParameterError("random_regular: n must be >= 1");
  if (d >= n && !(n == 1 && d == 0)) throw ParameterError("random_regular: need d < n");
  if ((n * d) % 2 != 0) throw ParameterError("random_regular: n*d must be even");

  CounterRng rng(seed, StreamTag::kGenerator);
  const auto key = [n](std::size_t u, std::size_t v) {
    return u < v ? u * n + v : v * n + u;
  };

  for (std::size_t attempt = 0; attempt < kRandomRegularMaxAttempts; ++attempt) {
    std::vector<std::size_t> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t r = 0; r < d; ++r) stubs.push_back(v);

    std::unordered_set<std::size_t> present;
    std::vector<Edge> edges;
    bool dead_end = false;
    std::size_t misses = 0;

    while (!stubs.empty()) {
      std::size_t a = rng.below(stubs.size());
      std::size_t b = rng.below(stubs.size() - 1);
      if (b >= a) ++b;
      const std::size_t u = stubs[a];
      const std::size_t v = stubs[b];
      if (u != v && !present.contains(key(u, v))) {
        present.insert(key(u, v));
        edges.push_back({u, v, 1.0});
        if (a < b) std::swap(a, b);
        stubs[a] = stubs.back();
        stubs.pop_back();
        stubs[b] = stubs.back();
        stubs.pop_back();
        misses = 0;
        continue;
      }
      if (++misses < 64) continue;
      bool admissible = false;
      for (std::size_t x = 0; x < stubs.size() && !admissible; ++x)
        for (std::size_t y = x + 1; y < stubs.size(); ++y)
          if (stubs[x] != stubs[y] && !present.contains(key(stubs[x], stubs[y]))) {
            admissible = true;
            break;
          }
      if (!admissible) {
        dead_end = true;
        break;
      }
      misses = 0;
    }
    if (!dead_end) return WeightedGraph(n, std::move(edges));
  }
  throw ParameterError("random_regular: pairing model did not produce a simple graph");
}

inline WeightedGraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  switch (spec.family) {
    case GraphFamily::kComplete: return complete_graph(spec.n);
    case GraphFamily::kCycle: return cycle_graph(spec.n);
    case GraphFamily::kPath: return path_graph(spec.n);
    case GraphFamily::kHypercube: return hypercube_graph(spec.k);
    case GraphFamily::kPaley: return paley_graph(spec.q);
    case GraphFamily::kRandomRegular: return random_regular_graph(spec.n, spec.d, seed);
    case GraphFamily::kPetersen: return petersen_graph();
    case GraphFamily::kStar: return star_graph(spec.n);
  }
  throw ParameterError("unknown graph family");
}

}  // namespace percobound
