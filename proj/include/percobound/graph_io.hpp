#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "percobound/error.hpp"
#include "percobound/graph.hpp"

namespace percobound {

// {"n": <int>, "edges": [[i, j, w], ...]}; edges written in sorted order.
inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.i, e.j, e.w});
  return {{"n", g.n()}, {"edges", std::move(edges)}};
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
      throw ParameterError("graph JSON needs \"n\" and \"edges\"");
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1)
      throw ParameterError("graph JSON: \"n\" must be a positive integer");
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number())
        throw ParameterError("graph JSON: each edge must be [i, j, w]");
      if (e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
        throw ParameterError("graph JSON: negative vertex index");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    return WeightedGraph(n, std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw ParameterError(std::string("graph JSON: ") + ex.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParameterError(what + ": " + ex.what());
  }
}

inline WeightedGraph read_graph_file(const std::string& path) {
  return graph_from_json(parse_json_text(read_text_file(path), path));
}

inline void write_graph_file(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << graph_to_json(g).dump() << '\n';
}

}  // namespace percobound
