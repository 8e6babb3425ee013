#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "otw/error.hpp"
#include "otw/rational.hpp"

namespace otw {

using Vertex = std::size_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Rational w;

  bool operator==(const Edge&) const = default;
};

struct Graph {
  bool directed = false;
  std::size_t n = 0;
  std::vector<Edge> edges;

  bool operator==(const Graph&) const = default;
};

/// All-pairs shortest walk lengths. Unreachable pairs hold no value; there is
/// no finite sentinel for infinity.
class Metric {
 public:
  Metric() = default;
  Metric(bool directed, std::size_t n)
    : directed_(directed), n_(n), table_(n * n) {
    for (Vertex v = 0; v < n; ++v) table_[v * n + v] = Rational(0);
  }

  bool directed() const { return directed_; }
  std::size_t size() const { return n_; }

  bool reachable(Vertex u, Vertex v) const { return table_[u * n_ + v].has_value(); }

  const std::optional<Rational>& at(Vertex u, Vertex v) const { return table_[u * n_ + v]; }

  /// Finite distance; throws if v cannot be reached from u.
  const Rational& d(Vertex u, Vertex v) const {
    const auto& entry = table_[u * n_ + v];
    if (!entry) {
      throw Error(ErrorKind::infeasible,
                  "vertex " + std::to_string(v) + " unreachable from " + std::to_string(u));
    }
    return *entry;
  }

  void set(Vertex u, Vertex v, std::optional<Rational> value) {
    table_[u * n_ + v] = std::move(value);
  }

  bool operator==(const Metric&) const = default;

 private:
  bool directed_ = false;
  std::size_t n_ = 0;
  std::vector<std::optional<Rational>> table_;
};

/// Floyd-Warshall closure in exact arithmetic. Parallel edges and self-loops
/// collapse to the cheapest traversal.
inline Metric metric_closure(const Graph& g) {
  Metric m(g.directed, g.n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.u >= g.n || e.v >= g.n) {
      throw Error(ErrorKind::structural,
                  "edge " + std::to_string(i) + " references vertex outside [0," +
                    std::to_string(g.n) + ")");
    }
    if (e.w < 0) {
      throw Error(ErrorKind::structural, "edge " + std::to_string(i) + " has negative weight");
    }
    auto relax = [&m](Vertex a, Vertex b, const Rational& w) {
      const auto& cur = m.at(a, b);
      if (!cur || w < *cur) m.set(a, b, w);
    };
    relax(e.u, e.v, e.w);
    if (!g.directed) relax(e.v, e.u, e.w);
  }
  for (Vertex k = 0; k < g.n; ++k) {
    for (Vertex i = 0; i < g.n; ++i) {
      const auto& ik = m.at(i, k);
      if (!ik) continue;
      for (Vertex j = 0; j < g.n; ++j) {
        const auto& kj = m.at(k, j);
        if (!kj) continue;
        Rational via = *ik + *kj;
        const auto& ij = m.at(i, j);
        if (!ij || via < *ij) m.set(i, j, via);
      }
    }
  }
  return m;
}

/// The complete graph whose edge weights are the finite entries of `m`.
inline Graph complete_graph(const Metric& m) {
  Graph g{m.directed(), m.size(), {}};
  for (Vertex u = 0; u < m.size(); ++u)
    for (Vertex v = m.directed() ? 0 : u + 1; v < m.size(); ++v)
      if (u != v && m.reachable(u, v)) g.edges.push_back({u, v, *m.at(u, v)});
  return g;
}

struct Diagnostic {
  enum class Kind { negative_weight, vertex_out_of_range, unreachable };
  Kind kind;
  std::size_t index;  // edge index, or vertex id for `unreachable`
  std::string message;
};

/// Reports negative weights, out-of-range ids and vertices that cannot be
/// reached from `source`. A valid graph yields no diagnostics.
inline std::vector<Diagnostic> validate_graph(const Graph& g, std::optional<Vertex> source = {}) {
  std::vector<Diagnostic> out;
  Graph usable{g.directed, g.n, {}};
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    bool ok = true;
    if (e.u >= g.n || e.v >= g.n) {
      out.push_back({Diagnostic::Kind::vertex_out_of_range, i,
                     "edge " + std::to_string(i) + " references vertex outside [0," +
                       std::to_string(g.n) + ")"});
      ok = false;
    }
    if (e.w < 0) {
      out.push_back({Diagnostic::Kind::negative_weight, i,
                     "edge " + std::to_string(i) + " has negative weight " + to_string(e.w)});
      ok = false;
    }
    if (ok) usable.edges.push_back(e);
  }
  if (source && *source < g.n) {
    // Reachability only; weights are irrelevant here.
    std::vector<std::vector<Vertex>> adj(g.n);
    for (const Edge& e : usable.edges) {
      adj[e.u].push_back(e.v);
      if (!g.directed) adj[e.v].push_back(e.u);
    }
    std::vector<bool> seen(g.n, false);
    std::vector<Vertex> stack{*source};
    seen[*source] = true;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    for (Vertex v = 0; v < g.n; ++v)
      if (!seen[v])
        out.push_back({Diagnostic::Kind::unreachable, v,
                       "vertex " + std::to_string(v) + " unreachable from " +
                         std::to_string(*source)});
  }
  return out;
}

}  // namespace otw
