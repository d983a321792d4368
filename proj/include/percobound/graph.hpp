#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "percobound/error.hpp"
#include "percobound/matrix.hpp"

namespace percobound {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected weighted graph on vertices 0..n-1. Edges are stored once per
// unordered pair with i < j, strictly positive weight, sorted
// lexicographically. Immutable after construction.
class WeightedGraph {
 public:
  // Edges may be given in any order and with either endpoint first.
  // Self-loops, non-positive or non-finite weights, out-of-range endpoints and
  // duplicate pairs are rejected.
  WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ == 0) throw ParameterError("graph must have at least one vertex");
    for (Edge& e : edges_) {
      if (e.i == e.j) throw ParameterError("self-loop at vertex " + std::to_string(e.i));
      if (e.i > e.j) std::swap(e.i, e.j);
      if (e.j >= n_)
        throw ParameterError("edge endpoint " + std::to_string(e.j) + " out of range");
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw ParameterError("edge weights must be positive and finite");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges_.size(); ++k)
      if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
        throw ParameterError("duplicate edge (" + std::to_string(edges_[k].i) + ", " +
                             std::to_string(edges_[k].j) + ")");
  }

  std::size_t n() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

inline Matrix build_adjacency(const WeightedGraph& g) {
  Matrix a(g.n());
  for (const Edge& e : g.edges()) {
    a(e.i, e.j) = e.w;
    a(e.j, e.i) = e.w;
  }
  return a;
}

inline std::vector<double> weighted_degrees(const WeightedGraph& g) {
  std::vector<double> deg(g.n(), 0.0);
  for (const Edge& e : g.edges()) {
    deg[e.i] += e.w;
    deg[e.j] += e.w;
  }
  return deg;
}

// L = sum_{i<j} w_ij (e_i - e_j)(e_i - e_j)^T.
inline Matrix build_laplacian(const WeightedGraph& g) {
  Matrix l(g.n());
  for (const Edge& e : g.edges()) {
    l(e.i, e.i) += e.w;
    l(e.j, e.j) += e.w;
    l(e.i, e.j) -= e.w;
    l(e.j, e.i) -= e.w;
  }
  return l;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

inline std::size_t count_components(const WeightedGraph& g) {
  DisjointSets ds(g.n());
  std::size_t components = g.n();
  for (const Edge& e : g.edges())
    if (ds.unite(e.i, e.j)) --components;
  return components;
}

inline bool is_connected(const WeightedGraph& g) { return count_components(g) == 1; }

// Two-colouring by BFS.
inline bool is_bipartite(const WeightedGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<int> colour(n, -1);
  std::queue<std::size_t> q;
  for (std::size_t s = 0; s < n; ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj[u]) {
        if (colour[v] == -1) {
          colour[v] = 1 - colour[u];
          q.push(v);
        } else if (colour[v] == colour[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Subgraph induced on `keep` (vertex keep[k] becomes k).
inline WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::size_t> keep) {
  std::vector<std::size_t> index(g.n(), g.n());
  for (std::size_t k = 0; k < keep.size(); ++k) index[keep[k]] = k;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (index[e.i] < g.n() && index[e.j] < g.n()) edges.push_back({index[e.i], index[e.j], e.w});
  return WeightedGraph(keep.size(), std::move(edges));
}

}  // namespace percobound
