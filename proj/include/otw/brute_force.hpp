#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "otw/error.hpp"
#include "otw/instance.hpp"

namespace otw {

/// Exact optimum by depth-first branch-and-bound over the orders in which
/// positive-reward vertices are collected, each order scheduled earliest-first.
///
/// Children are explored in ascending vertex order and only strictly better
/// walks replace the incumbent, so the lexicographically smallest optimal
/// order is returned. Two prunes keep that property: an optimistic reward
/// bound, and a memo of the earliest time each (collected set, position) pair
/// was reached. Intended for at most ~12 collectable vertices.
///
namespace detail {

/// No-wait search: a walk cannot wait, so passing through vertices without
/// collecting (to arrive later) can pay off. Explores every move, bounded by
/// the budget (or the last deadline when free), with a memo of the times
/// already seen per (credited set, position).
inline WalkSolution brute_force_no_wait(const TwInstance& x, const std::vector<Vertex>& items) {
  const std::size_t n = x.size();
  std::vector<int> index(n, -1);
  for (std::size_t i = 0; i < items.size(); ++i) index[items[i]] = static_cast<int>(i);
  Rational horizon = x.budget;
  if (!x.budget_bounded()) {
    horizon = Rational(0);
    for (Vertex v : items) horizon = std::max(horizon, x.windows[v].deadline);
  }
  auto can_finish = [&](Vertex pos, const Rational& time) {
    if (x.end) {
      const auto& leg = x.metric.at(pos, *x.end);
      return leg && time + *leg <= x.budget;
    }
    return !x.budget_bounded() || time <= x.budget;
  };

  std::vector<Step> steps, best_steps;
  std::optional<Rational> best;
  std::map<std::pair<std::uint64_t, Vertex>, std::set<Rational>> seen;

  auto go = [&](auto&& self, const Rational& time, std::uint64_t mask, const Rational& reward,
                const Rational& remaining) -> void {
    Vertex pos = steps.back().vertex;
    if (!seen[{mask, pos}].insert(time).second) return;
    if (can_finish(pos, time) && (!best || reward > *best)) {
      best = reward;
      best_steps = steps;
    }
    if (best && reward + remaining <= *best) return;
    for (Vertex c = 0; c < n; ++c) {
      if (c == pos) continue;
      const auto& leg = x.metric.at(pos, c);
      if (!leg) continue;
      Rational at = time + *leg;
      if (at > horizon || !can_finish(c, at)) continue;
      int i = index[c];
      bool credit = i >= 0 && !(mask >> i & 1) && x.windows[c].contains(at);
      steps.push_back({c, credit});
      if (credit)
        self(self, at, mask | std::uint64_t{1} << i, reward + x.rewards[c], remaining - x.rewards[c]);
      else
        self(self, at, mask, reward, remaining);
      steps.pop_back();
    }
  };

  Rational total(0);
  for (Vertex v : items) total += x.rewards[v];
  auto begin = [&](Vertex v, bool flag, const Rational& time) {
    int i = index[v];
    bool credit = flag && i >= 0 && x.windows[v].contains(time);
    steps = {{v, flag}};
    std::uint64_t mask = credit ? std::uint64_t{1} << i : 0;
    Rational r = credit ? x.rewards[v] : Rational(0);
    go(go, time, mask, r, total - r);
  };
  if (x.start) {
    begin(*x.start, index[*x.start] >= 0 && x.windows[*x.start].contains(Rational(0)), Rational(0));
  } else {
    // a free walk starts anywhere, either at time 0 or at the release of a collected first vertex
    for (Vertex v = 0; v < n; ++v) {
      if (index[v] >= 0) begin(v, true, std::max(Rational(0), x.windows[v].release));
      begin(v, false, Rational(0));
    }
  }
  if (!best) throw Error(ErrorKind::infeasible, "no feasible walk");
  if (x.end) best_steps.push_back({*x.end, false});
  WalkEvaluation eval = evaluate_walk(x, best_steps);
  if (!eval.feasible) throw Error(ErrorKind::infeasible, "internal: " + eval.reason);
  return eval.walk;
}

}  // namespace detail

/// Under no-wait, walks may also pass through vertices without collecting
/// them; see detail::brute_force_no_wait.
inline WalkSolution brute_force_opt(const TwInstance& x) {
  x.validate();
  const std::size_t n = x.size();
  const bool wait = x.wait_policy == WaitPolicy::wait;

  if (x.end && x.start) {
    const auto& direct = x.metric.at(*x.start, *x.end);
    if (!direct || *direct > x.budget)
      throw Error(ErrorKind::infeasible, "end vertex cannot be reached within the budget");
  }

  std::vector<Vertex> items;
  for (Vertex v = 0; v < n; ++v)
    if (x.claimable(v)) items.push_back(v);
  if (items.size() > 62)
    throw Error(ErrorKind::guard, "brute force limited to 62 collectable vertices");

  struct Search {
    const TwInstance& x;
    const std::vector<Vertex>& items;
    bool wait;
    std::vector<std::size_t> sequence;
    std::vector<std::size_t> best_sequence;
    std::optional<Rational> best;
    std::unordered_map<std::uint64_t, Rational> memo;

    bool can_finish(std::optional<Vertex> pos, const Rational& time) const {
      if (x.end) {
        Vertex from = pos ? *pos : *x.end;
        const auto& leg = x.metric.at(from, *x.end);
        return leg && time + *leg <= x.budget;
      }
      if (x.start) return time <= x.budget;
      return true;
    }

    void run(std::optional<Vertex> pos, const Rational& time, std::uint64_t mask,
             const Rational& reward, const Rational& remaining) {
      if (can_finish(pos, time) && (!best || reward > *best)) {
        best = reward;
        best_sequence = sequence;
      }
      if (best && reward + remaining <= *best) return;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) continue;
        Vertex c = items[i];
        const TimeWindow& w = x.windows[c];
        Rational arrival(0);
        if (pos) {
          const auto& leg = x.metric.at(*pos, c);
          if (!leg) continue;
          arrival = time + *leg;
        }
        Rational at = arrival;
        if (wait || !pos) at = std::max(arrival, w.release);
        if (!w.contains(at)) continue;
        if (!can_finish(c, at)) continue;
        std::uint64_t next = mask | (std::uint64_t{1} << i);
        std::uint64_t key = next * (x.size() + 1) + c;
        auto it = memo.find(key);
        if (it != memo.end() && at >= it->second) continue;
        memo[key] = at;
        sequence.push_back(i);
        run(c, at, next, reward + x.rewards[c], remaining - x.rewards[c]);
        sequence.pop_back();
      }
    }
  };

  if (!wait) return detail::brute_force_no_wait(x, items);

  Rational total(0);
  for (Vertex v : items) total += x.rewards[v];
  Search search{x, items, wait, {}, {}, std::nullopt, {}};
  std::optional<Vertex> origin = x.start;
  search.run(origin, Rational(0), 0, Rational(0), total);
  if (!search.best) throw Error(ErrorKind::infeasible, "no feasible walk");

  std::vector<Step> order;
  if (x.start) order.push_back({*x.start, false});
  for (std::size_t i : search.best_sequence) order.push_back({items[i], true});
  if (x.end) order.push_back({*x.end, false});
  WalkEvaluation eval = evaluate_walk(x, order);
  if (!eval.feasible) throw Error(ErrorKind::infeasible, "internal: " + eval.reason);
  return eval.walk;
}

}  // namespace otw
