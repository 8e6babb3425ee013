#pragma once

// Shared fixtures and independent reference solvers for the test suites.
// Nothing here calls the library's solvers; the references are deliberately
// naive so that agreement means something.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "otw/generate.hpp"
#include "otw/otw.hpp"

namespace otw::testing {

inline Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

inline Graph path_graph(std::size_t n) {
  Graph g{false, n, {}};
  for (Vertex v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1, R(1)});
  return g;
}

/// Path 0-1-2-3 with unit edges, s = 0, t = 3, T = 5.
inline TwInstance line4(TimeWindow w1 = {R(1), R(2)}, TimeWindow w2 = {R(2), R(3)}) {
  return make_instance(path_graph(4), {{R(0), R(5)}, w1, w2, {R(0), R(5)}}, 0, 3, R(5));
}

// ---------------------------------------------------------------------------
// Reference optimum: every ordered subset of collectable vertices, scheduled
// earliest-first, no pruning and no memo.

inline Rational reference_opt(const TwInstance& x) {
  std::vector<Vertex> items;
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v)) items.push_back(v);
  std::optional<Rational> best;
  std::vector<Step> order;
  std::vector<bool> used(items.size(), false);
  std::function<void()> rec = [&] {
    std::vector<Step> full;
    if (x.start) full.push_back({*x.start, false});
    full.insert(full.end(), order.begin(), order.end());
    if (x.end) full.push_back({*x.end, false});
    WalkEvaluation e = evaluate_walk(x, full);
    if (!e.feasible) return;  // extending an infeasible prefix cannot help
    if (!best || e.walk.reward > *best) best = e.walk.reward;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      order.push_back({items[i], true});
      rec();
      order.pop_back();
      used[i] = false;
    }
  };
  rec();
  if (!best) throw Error(ErrorKind::infeasible, "reference: no feasible walk");
  return *best;
}

/// No-wait reference: every vertex sequence up to the time horizon, all
/// visits flagged, scored by evaluate_walk. Exponential; tiny instances only.
inline Rational reference_no_wait(const TwInstance& x) {
  Rational horizon = x.budget;
  if (!x.budget_bounded()) {
    horizon = R(0);
    for (Vertex v = 0; v < x.size(); ++v)
      if (x.claimable(v)) horizon = std::max(horizon, x.windows[v].deadline);
  }
  TwInstance open = x;  // prefixes need not end at the end vertex
  open.end.reset();
  std::optional<Rational> best;
  std::vector<Step> walk;
  std::function<void()> rec = [&] {
    std::vector<Step> full = walk;
    if (x.end) full.push_back({*x.end, false});
    WalkEvaluation e = evaluate_walk(x, full);
    if (e.feasible && (!best || e.walk.reward > *best)) best = e.walk.reward;
    WalkEvaluation prefix = evaluate_walk(open, walk);
    if (!prefix.feasible) return;
    Rational now = prefix.walk.schedule.back().time;
    for (Vertex c = 0; c < x.size(); ++c) {
      if (c == walk.back().vertex || !x.metric.reachable(walk.back().vertex, c)) continue;
      if (now + x.metric.d(walk.back().vertex, c) > horizon) continue;
      walk.push_back({c, true});
      rec();
      walk.pop_back();
    }
  };
  std::vector<Vertex> firsts;
  if (x.start) firsts.push_back(*x.start);
  else
    for (Vertex v = 0; v < x.size(); ++v) firsts.push_back(v);
  for (Vertex v : firsts)
    for (bool flag : {true, false}) {
      if (x.start && !flag) continue;
      walk = {{v, flag}};
      rec();
    }
  if (!best) throw Error(ErrorKind::infeasible, "reference: no feasible walk");
  return *best;
}

/// Reference point-to-point orienteering: all ordered subsets, no pruning.
inline Rational reference_orienteering(const Metric& m, const std::vector<Target>& eligible,
                                       Vertex from, Vertex to, const Rational& budget) {
  if (!m.reachable(from, to) || m.d(from, to) > budget) return R(-1);
  std::vector<Vertex> order{from};
  std::vector<bool> used(eligible.size(), false);
  Rational best(-1);
  std::function<void()> rec = [&] {
    std::vector<Vertex> full = order;
    full.push_back(to);
    bool ok = true;
    Rational len(0);
    for (std::size_t i = 1; i < full.size() && ok; ++i) {
      if (!m.reachable(full[i - 1], full[i])) ok = false;
      else len += m.d(full[i - 1], full[i]);
    }
    if (!ok || len > budget) return;
    best = std::max(best, credited_reward(m, eligible, full, R(0)));
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      order.push_back(eligible[i].vertex);
      rec();
      order.pop_back();
      used[i] = false;
    }
  };
  rec();
  return best;
}

// ---------------------------------------------------------------------------
// An alpha = 2 oracle: the exact walk, shortened by dropping targets from the
// end while at least half of the exact reward remains. Shortcuts never get
// longer on a metric, so the walk stays within budget.

class HalvingOracle : public OrienteeringOracle {
 public:
  OracleSpec spec() const override { return {"halving", R(2), false}; }
  WalkResult solve(const OrienteeringQuery& q) const override {
    WalkResult full = ExactOrienteering().solve(q);
    if (!full.feasible() || full.order.size() <= 2) return full;
    std::vector<Vertex> order = full.order;
    while (order.size() > 2) {
      std::vector<Vertex> shorter = order;
      shorter.erase(shorter.end() - 2);
      if (credited_reward(q.metric, q.eligible, shorter, R(0)) * 2 < full.reward) break;
      order = shorter;
    }
    WalkResult r;
    r.order = order;
    r.duration = walk_length(q.metric, order);
    r.reward = credited_reward(q.metric, q.eligible, order, R(0));
    return r;
  }
};

// ---------------------------------------------------------------------------
// Seeded instance builders.

/// Bumps the seed until the anchored instance admits a walk.
inline TwInstance feasible_instance(GenSpec spec) {
  for (;; ++spec.seed) {
    TwInstance x = generate_instance(spec);
    if (!x.anchored()) return x;
    const auto& d = x.metric.at(*x.start, *x.end);
    if (d && *d <= x.budget) return x;
  }
}

inline const char* family_for(std::uint64_t seed) {
  static const char* families[] = {"random-metric", "directed-random", "line", "euclidean-grid"};
  return families[seed % 4];
}

inline GenSpec base_spec(std::uint64_t seed, std::size_t n) {
  GenSpec g;
  g.family = family_for(seed);
  g.n = n;
  g.seed = seed;
  g.max_weight = 3;
  return g;
}

/// Integer endpoints, window lengths in [1, l_max].
inline TwInstance integer_instance(std::uint64_t seed, std::size_t n, std::int64_t l_max) {
  GenSpec g = base_spec(seed, n);
  g.len_lo = R(1);
  g.len_hi = R(l_max);
  g.horizon = R(l_max + 8);
  g.max_reward = 2;
  return feasible_instance(g);
}

/// Window lengths in [1, 2] on a 1/10 grid.
inline TwInstance short_window_instance(std::uint64_t seed, std::size_t n, bool free = false) {
  GenSpec g = base_spec(seed, n);
  g.family = g.family == std::string("euclidean-grid") ? "random-metric" : g.family;
  g.len_lo = R(1);
  g.len_hi = R(2);
  g.horizon = R(8);
  g.grain = 10;
  g.max_reward = 2;
  g.free_endpoints = free;
  return feasible_instance(g);
}

/// Window lengths in [1, 8] on a 1/4 grid.
inline TwInstance general_instance(std::uint64_t seed, std::size_t n) {
  GenSpec g = base_spec(seed, n);
  g.family = g.family == std::string("euclidean-grid") ? "random-metric" : g.family;
  g.len_lo = R(1);
  g.len_hi = R(8);
  g.horizon = R(14);
  g.grain = 4;
  g.max_reward = 2;
  return feasible_instance(g);
}

/// Deadline instance: start at 0, every release 0, integer deadlines; odd
/// seeds also anchor the end.
inline TwInstance deadline_instance(std::uint64_t seed, std::size_t n) {
  GenSpec g = base_spec(seed, n);
  g.family = g.family == std::string("euclidean-grid") ? "random-metric" : g.family;
  g.len_lo = R(1);
  g.len_hi = R(8);
  g.horizon = R(9);
  g.max_reward = 3;
  TwInstance x = feasible_instance(g);
  for (auto& w : x.windows) w.release = R(0);
  if (seed % 2 == 0) x.end.reset();
  return x;
}

/// Every collectable window has length zero; times on a 1/2 grid.
inline TwInstance zero_window_instance(std::uint64_t seed, std::size_t n) {
  GenSpec g = base_spec(seed, n);
  g.family = g.family == std::string("euclidean-grid") ? "random-metric" : g.family;
  g.len_lo = R(0);
  g.len_hi = R(0);
  g.horizon = R(10);
  g.grain = 2;
  g.max_reward = 3;
  TwInstance x = feasible_instance(g);
  if (seed % 3 == 0) x.start.reset(), x.end.reset();
  return x;
}

struct ModularCase {
  TwInstance instance;
  ModularPartition partition;
};

/// Consecutive integral blocks; every member's window is exactly its block.
inline ModularCase modular_instance(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed * 7919 + 11);
  auto draw = [&](std::int64_t lo, std::int64_t hi) { return detail::draw(rng, lo, hi); };
  GenSpec g = base_spec(seed, n);
  g.family = g.family == std::string("euclidean-grid") ? "random-metric" : g.family;
  g.len_lo = R(1);
  g.len_hi = R(1);
  g.horizon = R(30);
  TwInstance x = feasible_instance(g);
  const std::size_t inner = n - 2;
  const std::int64_t blocks = draw(1, std::min<std::int64_t>(3, static_cast<std::int64_t>(inner)));
  ModularPartition p;
  std::int64_t clock = draw(0, 2);
  for (std::int64_t b = 0; b < blocks; ++b) {
    std::int64_t len = draw(0, 4);
    p.blocks.push_back({{}, R(clock), R(clock + len)});
    clock += len + draw(0, 2);
  }
  for (Vertex v = 1; v + 1 < n; ++v) {
    auto b = static_cast<std::size_t>(draw(0, blocks - 1));
    p.blocks[b].members.push_back(v);
    x.windows[v] = {p.blocks[b].release, p.blocks[b].deadline};
    x.rewards[v] = R(draw(1, 3));
  }
  x.budget = std::max(R(clock + draw(0, 3)), x.metric.d(0, n - 1));
  x.windows[0] = {R(0), x.budget};
  x.windows[n - 1] = {R(0), x.budget};
  std::erase_if(p.blocks, [](const ModularBlock& b) { return b.members.empty(); });
  return {x, p};
}

/// A walk re-evaluates to exactly what it claims on `x`.
inline bool reevaluates(const TwInstance& x, const WalkSolution& w) {
  WalkEvaluation e = evaluate_walk(x, w.steps());
  return e.feasible && e.walk == w;
}

inline Rational ceil_div(const Rational& a, std::int64_t b) { return ceil(a / b); }

}  // namespace otw::testing
