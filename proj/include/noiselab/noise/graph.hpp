#pragma once

#include "noiselab/core/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

namespace noiselab {

// Undirected graph on n qubits. An edge (a, a) is a loop.
class GraphSpec {
 public:
  using Edge = std::pair<int, int>;

  GraphSpec(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    require(n >= 1, "graph needs at least one vertex");
    std::set<Edge> seen;
    for (auto& [a, b] : edges_) {
      require(a >= 0 && b >= 0 && a < n && b < n, "graph edge index out of range");
      if (a > b) std::swap(a, b);
      require(seen.insert({a, b}).second, "duplicate graph edge");
    }
    require(!edges_.empty(), "graph needs at least one edge");
  }

  static GraphSpec complete_with_loops(int n) {
    std::vector<Edge> e;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) e.emplace_back(a, b);
    return {n, std::move(e)};
  }

  static GraphSpec path(int n) {
    std::vector<Edge> e;
    for (int a = 0; a + 1 < n; ++a) e.emplace_back(a, a + 1);
    if (n == 1) e.emplace_back(0, 0);
    return {n, std::move(e)};
  }

  static GraphSpec cycle(int n) {
    require(n >= 3, "cycle needs at least 3 vertices");
    std::vector<Edge> e;
    for (int a = 0; a < n; ++a) e.emplace_back(a, (a + 1) % n);
    return {n, std::move(e)};
  }

  static GraphSpec grid(int rows, int cols) {
    require(rows >= 1 && cols >= 1 && rows * cols >= 2, "grid needs at least two vertices");
    std::vector<Edge> e;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int v = r * cols + c;
        if (c + 1 < cols) e.emplace_back(v, v + 1);
        if (r + 1 < rows) e.emplace_back(v, v + cols);
      }
    }
    return {rows * cols, std::move(e)};
  }

  int vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  nlohmann::json to_json() const {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& [a, b] : edges_) e.push_back({a, b});
    return {{"n", n_}, {"edges", e}};
  }

  // Accepts {"n":..,"edges":[[a,b],..]} or a named shape:
  // {"shape":"complete"|"path"|"cycle","n":..} / {"shape":"grid","rows":..,"cols":..}.
  static GraphSpec from_json(const nlohmann::json& j) {
    require(j.is_object(), "graph must be an object");
    for (const auto& [key, _] : j.items()) {
      require(key == "n" || key == "edges" || key == "shape" || key == "rows" || key == "cols",
              "unknown graph field: " + key);
    }
    if (j.contains("edges")) {
      std::vector<Edge> e;
      for (const auto& p : j.at("edges")) {
        require(p.is_array() && p.size() == 2, "graph edge must be a pair");
        e.emplace_back(p[0].get<int>(), p[1].get<int>());
      }
      return {j.at("n").get<int>(), std::move(e)};
    }
    const std::string shape = j.value("shape", "complete");
    if (shape == "grid") return grid(j.at("rows").get<int>(), j.at("cols").get<int>());
    const int n = j.at("n").get<int>();
    if (shape == "complete") return complete_with_loops(n);
    if (shape == "path") return path(n);
    if (shape == "cycle") return cycle(n);
    throw std::invalid_argument("unknown graph shape: " + shape);
  }

 private:
  int n_;
  std::vector<Edge> edges_;
};

}  // namespace noiselab
