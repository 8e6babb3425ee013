#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "otw/error.hpp"
#include "otw/metric.hpp"
#include "otw/rational.hpp"

namespace otw {

/// Declared guarantee of a black-box solver. `empirical` marks heuristics
/// whose ratio is only a reporting label.
struct OracleSpec {
  std::string name;
  Rational ratio{1};
  bool empirical = false;
};

struct Target {
  Vertex vertex = 0;
  Rational reward;
  std::optional<Rational> deadline;  // absolute time; none for plain orienteering
};

/// Point-to-point orienteering: a walk from `from` to `to` of length at most
/// `budget`, rewarded by the distinct eligible vertices it visits.
struct OrienteeringQuery {
  const Metric& metric;
  std::vector<Target> eligible;
  Vertex from = 0;
  Vertex to = 0;
  Rational budget;
};

/// Deadline orienteering: leave `from` at `start_time`, optionally finish at
/// `to`, never later than `horizon`; a target counts when reached by its
/// deadline.
struct DeadlineQuery {
  const Metric& metric;
  std::vector<Target> eligible;
  Vertex from = 0;
  Rational start_time;
  std::optional<Vertex> to;
  Rational horizon;
};

struct WalkResult {
  std::vector<Vertex> order;  // empty when infeasible
  Rational reward;
  Rational duration;

  bool feasible() const { return !order.empty(); }
};

inline Rational walk_length(const Metric& m, const std::vector<Vertex>& order) {
  Rational total(0);
  for (std::size_t i = 1; i < order.size(); ++i) total += m.d(order[i - 1], order[i]);
  return total;
}

/// Reward of `order` started at `start_time`: each eligible vertex counts once,
/// at its first visit, if that visit meets its deadline.
inline Rational credited_reward(const Metric& m, const std::vector<Target>& eligible,
                                const std::vector<Vertex>& order, const Rational& start_time) {
  std::map<Vertex, const Target*> lookup;
  for (const Target& t : eligible) lookup[t.vertex] = &t;
  std::set<Vertex> seen;
  Rational reward(0), now = start_time;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) now += m.d(order[i - 1], order[i]);
    auto it = lookup.find(order[i]);
    if (it == lookup.end() || seen.count(order[i])) continue;
    if (it->second->deadline && now > *it->second->deadline) continue;
    seen.insert(order[i]);
    reward += it->second->reward;
  }
  return reward;
}

class OrienteeringOracle {
 public:
  virtual ~OrienteeringOracle() = default;
  virtual OracleSpec spec() const = 0;
  virtual WalkResult solve(const OrienteeringQuery& q) const = 0;
};

class DeadlineOracle {
 public:
  virtual ~DeadlineOracle() = default;
  virtual OracleSpec spec() const = 0;
  virtual WalkResult solve(const DeadlineQuery& q) const = 0;
};

inline WalkResult best_orienteering_walk(const OrienteeringOracle& oracle,
                                         const OrienteeringQuery& q) {
  return oracle.solve(q);
}

inline WalkResult best_deadline_walk(const DeadlineOracle& oracle, const DeadlineQuery& q) {
  return oracle.solve(q);
}

namespace detail {

/// Exact search shared by the exact oracles: depth-first over the order in
/// which targets are claimed, ascending vertex ids first, replacing the
/// incumbent only on strict improvement, with an optimistic-reward prune and
/// an earliest-time memo per (claimed set, position).
class ExactWalkSearch {
 public:
  ExactWalkSearch(const Metric& m, const std::vector<Target>& eligible, Vertex from,
                  Rational start_time, std::optional<Vertex> to, Rational horizon)
    : m_(m), from_(from), start_(start_time), to_(to), horizon_(horizon) {
    for (const Target& t : eligible) {
      if (t.reward <= 0) continue;
      if (t.vertex == from) {
        if (!t.deadline || start_time <= *t.deadline) base_ += t.reward;
        continue;
      }
      items_.push_back(t);
    }
    std::sort(items_.begin(), items_.end(),
              [](const Target& a, const Target& b) { return a.vertex < b.vertex; });
    if (items_.size() > 62) throw Error(ErrorKind::guard, "exact oracle limited to 62 targets");
  }

  WalkResult run() {
    if (!can_finish(from_, start_)) return {};
    Rational remaining(0);
    for (const Target& t : items_) remaining += t.reward;
    dfs(from_, start_, 0, base_, remaining);
    WalkResult out;
    out.order.push_back(from_);
    for (std::size_t i : best_sequence_) out.order.push_back(items_[i].vertex);
    if (to_ && out.order.back() != *to_) out.order.push_back(*to_);
    out.reward = *best_;
    out.duration = walk_length(m_, out.order);
    return out;
  }

 private:
  bool can_finish(Vertex pos, const Rational& time) const {
    if (!to_) return time <= horizon_;
    const auto& leg = m_.at(pos, *to_);
    return leg && time + *leg <= horizon_;
  }

  // Reward for finishing now, including the end vertex if it is still owed.
  Rational finish_bonus(Vertex pos, const Rational& time, std::uint64_t mask) const {
    if (!to_ || pos == *to_) return Rational(0);
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].vertex != *to_ || (mask >> i & 1)) continue;
      Rational arrival = time + m_.d(pos, *to_);
      if (!items_[i].deadline || arrival <= *items_[i].deadline) return items_[i].reward;
    }
    return Rational(0);
  }

  void dfs(Vertex pos, const Rational& time, std::uint64_t mask, const Rational& reward,
           const Rational& remaining) {
    Rational value = reward + finish_bonus(pos, time, mask);
    if (!best_ || value > *best_) {
      best_ = value;
      best_sequence_ = sequence_;
    }
    if (reward + remaining <= *best_) return;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (mask >> i & 1) continue;
      const Target& t = items_[i];
      const auto& leg = m_.at(pos, t.vertex);
      if (!leg) continue;
      Rational at = time + *leg;
      if (t.deadline && at > *t.deadline) continue;
      if (!can_finish(t.vertex, at)) continue;
      std::uint64_t next = mask | (std::uint64_t{1} << i);
      std::uint64_t key = next * (m_.size() + 1) + t.vertex;
      auto it = memo_.find(key);
      if (it != memo_.end() && at >= it->second) continue;
      memo_[key] = at;
      sequence_.push_back(i);
      dfs(t.vertex, at, next, reward + t.reward, remaining - t.reward);
      sequence_.pop_back();
    }
  }

  const Metric& m_;
  Vertex from_;
  Rational start_;
  std::optional<Vertex> to_;
  Rational horizon_;
  Rational base_{0};
  std::vector<Target> items_;
  std::vector<std::size_t> sequence_, best_sequence_;
  std::optional<Rational> best_;
  std::unordered_map<std::uint64_t, Rational> memo_;
};

inline std::vector<Target> strip_deadlines(std::vector<Target> eligible) {
  for (Target& t : eligible) t.deadline.reset();
  return eligible;
}

}  // namespace detail

/// Exact point-to-point orienteering (ratio 1) for small eligible sets.
class ExactOrienteering : public OrienteeringOracle {
 public:
  OracleSpec spec() const override { return {"exact", Rational(1), false}; }

  WalkResult solve(const OrienteeringQuery& q) const override {
    detail::ExactWalkSearch search(q.metric, detail::strip_deadlines(q.eligible), q.from,
                                   Rational(0), q.to, q.budget);
    return search.run();
  }
};

/// Cheapest insertion: repeatedly insert the vertex with the highest reward
/// per unit of detour until nothing else fits the budget. No ratio guarantee.
class GreedyOrienteering : public OrienteeringOracle {
 public:
  OracleSpec spec() const override { return {"greedy", Rational(1), true}; }

  WalkResult solve(const OrienteeringQuery& q) const override {
    const Metric& m = q.metric;
    if (!m.reachable(q.from, q.to) || m.d(q.from, q.to) > q.budget) return {};
    std::vector<Vertex> route{q.from, q.to};
    Rational length = m.d(q.from, q.to);

    std::vector<Target> pool;
    for (const Target& t : q.eligible)
      if (t.reward > 0 && t.vertex != q.from && t.vertex != q.to) pool.push_back(t);
    std::sort(pool.begin(), pool.end(),
              [](const Target& a, const Target& b) { return a.vertex < b.vertex; });

    while (true) {
      std::optional<std::size_t> pick;
      std::size_t pick_pos = 0;
      Rational pick_detour(0);
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const Target& t = pool[i];
        for (std::size_t pos = 0; pos + 1 < route.size(); ++pos) {
          Vertex a = route[pos], b = route[pos + 1];
          if (!m.reachable(a, t.vertex) || !m.reachable(t.vertex, b)) continue;
          Rational detour = m.d(a, t.vertex) + m.d(t.vertex, b) - m.d(a, b);
          if (length + detour > q.budget) continue;
          bool better = !pick;
          if (pick) {
            // reward / detour, compared by cross-multiplying; zero detour wins
            const Rational& r_best = pool[*pick].reward;
            if (detour == 0 && pick_detour == 0)
              better = t.reward > r_best;
            else
              better = t.reward * pick_detour > r_best * detour;
          }
          if (better) {
            pick = i;
            pick_pos = pos;
            pick_detour = detour;
          }
        }
      }
      if (!pick) break;
      route.insert(route.begin() + static_cast<std::ptrdiff_t>(pick_pos) + 1, pool[*pick].vertex);
      length += pick_detour;
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*pick));
    }
    WalkResult out;
    out.order = route;
    out.duration = walk_length(m, route);
    out.reward = credited_reward(m, q.eligible, route, Rational(0));
    return out;
  }
};

/// Exact deadline orienteering (ratio 1) for small eligible sets.
class ExactDeadline : public DeadlineOracle {
 public:
  OracleSpec spec() const override { return {"exact", Rational(1), false}; }

  WalkResult solve(const DeadlineQuery& q) const override {
    detail::ExactWalkSearch search(q.metric, q.eligible, q.from, q.start_time, q.to, q.horizon);
    return search.run();
  }
};

/// Splits targets into deadline classes [2^j, 2^(j+1)), answers one
/// orienteering query per class with budget 2^j - start_time, and keeps the
/// best walk. A heuristic; no ratio is claimed.
class LayeredDeadline : public DeadlineOracle {
 public:
  LayeredDeadline() : inner_(std::make_shared<GreedyOrienteering>()) {}
  explicit LayeredDeadline(std::shared_ptr<const OrienteeringOracle> inner)
    : inner_(std::move(inner)) {}

  OracleSpec spec() const override { return {"layered", Rational(1), true}; }

  WalkResult solve(const DeadlineQuery& q) const override {
    const Metric& m = q.metric;
    auto finish_ok = [&](const std::vector<Vertex>& order) {
      return q.start_time + walk_length(m, order) <= q.horizon;
    };
    WalkResult best;
    {
      std::vector<Vertex> direct{q.from};
      if (q.to && *q.to != q.from) direct.push_back(*q.to);
      if (q.to && !m.reachable(q.from, *q.to)) return {};
      if (!finish_ok(direct)) return {};
      best.order = direct;
      best.duration = walk_length(m, direct);
      best.reward = credited_reward(m, q.eligible, direct, q.start_time);
    }
    std::map<int, std::vector<Target>> classes;
    for (const Target& t : q.eligible) {
      if (t.reward <= 0 || !t.deadline || *t.deadline < q.start_time || *t.deadline <= 0)
        continue;
      classes[floor_log2(*t.deadline)].push_back(t);
    }
    for (const auto& [j, members] : classes) {
      Rational budget = std::min(pow2(j), q.horizon) - q.start_time;
      if (budget < 0) continue;
      std::vector<Target> plain = detail::strip_deadlines(members);
      OrienteeringQuery sub{m, plain, q.from, q.to.value_or(q.from), budget};
      WalkResult r;
      if (q.to) {
        r = inner_->solve(sub);
      } else {
        // Unanchored: try each member as the closing vertex.
        for (const Target& t : members) {
          OrienteeringQuery open{m, plain, q.from, t.vertex, budget};
          WalkResult cand = inner_->solve(open);
          if (cand.feasible() && (!r.feasible() || cand.reward > r.reward)) r = cand;
        }
      }
      if (!r.feasible() || !finish_ok(r.order)) continue;
      Rational reward = credited_reward(m, q.eligible, r.order, q.start_time);
      if (reward > best.reward) {
        best.order = r.order;
        best.duration = walk_length(m, r.order);
        best.reward = reward;
      }
    }
    return best;
  }

 private:
  std::shared_ptr<const OrienteeringOracle> inner_;
};

/// Nondominated (duration, reward) pairs of from->to walks, each with a witness.
struct ParetoEntry {
  Rational duration;
  Rational reward;
  std::vector<Vertex> witness;
};

struct ParetoProfile {
  std::vector<ParetoEntry> entries;  // strictly increasing in both coordinates
};

namespace detail {

/// Minimum from->to length through each subset of `items` (Held-Karp), with
/// the ordering that attains it.
struct SubsetTours {
  std::vector<Vertex> items;
  std::vector<std::optional<Rational>> length;  // per mask, ending at `to`
  std::vector<std::vector<Vertex>> witness;
};

inline SubsetTours subset_tours(const Metric& m, const std::vector<Vertex>& items, Vertex from,
                                Vertex to) {
  const std::size_t k = items.size();
  if (k > 20) throw Error(ErrorKind::guard, "subset enumeration limited to 20 vertices");
  const std::size_t masks = std::size_t{1} << k;
  // best[mask * k + last]: shortest from->...->items[last] visiting exactly mask.
  std::vector<std::optional<Rational>> best(masks * k);
  std::vector<int> parent(masks * k, -1);
  for (std::size_t i = 0; i < k; ++i)
    if (m.reachable(from, items[i])) best[(std::size_t{1} << i) * k + i] = m.d(from, items[i]);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    for (std::size_t last = 0; last < k; ++last) {
      const auto& cur = best[mask * k + last];
      if (!cur) continue;
      for (std::size_t nx = 0; nx < k; ++nx) {
        if (mask >> nx & 1) continue;
        const auto& leg = m.at(items[last], items[nx]);
        if (!leg) continue;
        std::size_t next = mask | (std::size_t{1} << nx);
        Rational len = *cur + *leg;
        auto& slot = best[next * k + nx];
        if (!slot || len < *slot) {
          slot = len;
          parent[next * k + nx] = static_cast<int>(last);
        }
      }
    }
  }
  SubsetTours out{items, std::vector<std::optional<Rational>>(masks),
                  std::vector<std::vector<Vertex>>(masks)};
  if (m.reachable(from, to)) {
    out.length[0] = m.d(from, to);
    out.witness[0] = from == to ? std::vector<Vertex>{from} : std::vector<Vertex>{from, to};
  }
  for (std::size_t mask = 1; mask < masks; ++mask) {
    std::optional<Rational> top;
    std::size_t top_last = 0;
    for (std::size_t last = 0; last < k; ++last) {
      const auto& cur = best[mask * k + last];
      if (!cur || !m.reachable(items[last], to)) continue;
      Rational len = *cur + m.d(items[last], to);
      if (!top || len < *top) {
        top = len;
        top_last = last;
      }
    }
    if (!top) continue;
    out.length[mask] = top;
    std::vector<Vertex> rev;
    std::size_t cur_mask = mask;
    int last = static_cast<int>(top_last);
    while (last >= 0) {
      rev.push_back(items[static_cast<std::size_t>(last)]);
      int prev = parent[cur_mask * k + static_cast<std::size_t>(last)];
      cur_mask &= ~(std::size_t{1} << static_cast<std::size_t>(last));
      last = prev;
    }
    std::vector<Vertex> order{from};
    order.insert(order.end(), rev.rbegin(), rev.rend());
    if (order.back() != to || order.size() == 1) order.push_back(to);
    out.witness[mask] = std::move(order);
  }
  return out;
}

inline std::vector<Vertex> interior_items(const std::vector<Target>& eligible, Vertex from,
                                          Vertex to) {
  std::vector<Vertex> items;
  for (const Target& t : eligible)
    if (t.reward > 0 && t.vertex != from && t.vertex != to) items.push_back(t.vertex);
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

}  // namespace detail

/// Every nondominated (duration, reward) trade-off of from->to walks within
/// `horizon`, ignoring deadlines. Empty when `to` cannot be reached in time.
inline ParetoProfile pareto_profiles(const Metric& m, const std::vector<Target>& eligible,
                                     Vertex from, Vertex to, const Rational& horizon) {
  std::vector<Vertex> items = detail::interior_items(eligible, from, to);
  detail::SubsetTours tours = detail::subset_tours(m, items, from, to);
  std::vector<ParetoEntry> all;
  for (std::size_t mask = 0; mask < tours.length.size(); ++mask) {
    if (!tours.length[mask] || *tours.length[mask] > horizon) continue;
    const auto& w = tours.witness[mask];
    all.push_back({*tours.length[mask], credited_reward(m, eligible, w, Rational(0)), w});
  }
  std::stable_sort(all.begin(), all.end(), [](const ParetoEntry& a, const ParetoEntry& b) {
    if (a.duration != b.duration) return a.duration < b.duration;
    return a.reward > b.reward;
  });
  ParetoProfile profile;
  for (auto& e : all)
    if (profile.entries.empty() || e.reward > profile.entries.back().reward)
      profile.entries.push_back(std::move(e));
  return profile;
}

/// Candidate durations for a from->to walk through subsets of `items`: the
/// shortest tour length of every subset, sorted and distinct.
inline std::vector<Rational> subset_length_grid(const Metric& m, const std::vector<Vertex>& items,
                                                Vertex from, Vertex to) {
  detail::SubsetTours tours = detail::subset_tours(m, items, from, to);
  std::vector<Rational> grid;
  for (const auto& len : tours.length)
    if (len) grid.push_back(*len);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// Lengths of every simple from->to ordering through subsets of `items`,
/// sorted and distinct. Falls back to per-subset shortest lengths when the
/// enumeration would exceed `cap` orderings.
inline std::vector<Rational> ordering_length_grid(const Metric& m, const std::vector<Vertex>& items,
                                                  Vertex from, Vertex to,
                                                  std::size_t cap = 200000) {
  std::set<Rational> seen;
  std::size_t visited = 0;
  bool overflow = false;
  std::vector<bool> used(items.size(), false);
  auto dfs = [&](auto&& self, Vertex pos, const Rational& len) -> void {
    if (overflow) return;
    if (++visited > cap) {
      overflow = true;
      return;
    }
    if (m.reachable(pos, to)) seen.insert(len + m.d(pos, to));
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i] || !m.reachable(pos, items[i])) continue;
      used[i] = true;
      self(self, items[i], len + m.d(pos, items[i]));
      used[i] = false;
    }
  };
  dfs(dfs, from, Rational(0));
  if (overflow) return subset_length_grid(m, items, from, to);
  return {seen.begin(), seen.end()};
}

/// Wraps an orienteering oracle so that, within one solve, the reward it
/// reports never decreases with the budget: every answer is the best walk
/// seen at any probed budget up to the one asked for.
class MonotoneOrienteering {
 public:
  MonotoneOrienteering(const OrienteeringOracle& oracle, const Metric& m,
                       std::vector<Target> eligible)
    : oracle_(oracle), m_(m), eligible_(std::move(eligible)) {}

  const OracleSpec spec() const { return oracle_.spec(); }
  const std::vector<Target>& eligible() const { return eligible_; }

  WalkResult query(Vertex from, Vertex to, const Rational& budget) {
    auto& cache = cache_[{from, to}];
    auto hit = cache.find(budget);
    if (hit == cache.end()) {
      OrienteeringQuery q{m_, eligible_, from, to, budget};
      hit = cache.emplace(budget, oracle_.solve(q)).first;
    }
    WalkResult best;
    for (auto it = cache.begin(); it != cache.end() && it->first <= budget; ++it) {
      const WalkResult& r = it->second;
      if (r.feasible() && (!best.feasible() || r.reward > best.reward)) best = r;
    }
    return best;
  }

 private:
  const OrienteeringOracle& oracle_;
  const Metric& m_;
  std::vector<Target> eligible_;
  std::map<std::pair<Vertex, Vertex>, std::map<Rational, WalkResult>> cache_;
};

/// The deadline-oracle counterpart of MonotoneOrienteering, keyed by
/// (from, to, start time) and monotone in the horizon.
class MonotoneDeadline {
 public:
  MonotoneDeadline(const DeadlineOracle& oracle, const Metric& m, std::vector<Target> eligible)
    : oracle_(oracle), m_(m), eligible_(std::move(eligible)) {}

  const OracleSpec spec() const { return oracle_.spec(); }
  const std::vector<Target>& eligible() const { return eligible_; }

  WalkResult query(Vertex from, const Rational& start_time, std::optional<Vertex> to,
                   const Rational& horizon) {
    auto& cache = cache_[{from, to, start_time}];
    auto hit = cache.find(horizon);
    if (hit == cache.end()) {
      DeadlineQuery q{m_, eligible_, from, start_time, to, horizon};
      hit = cache.emplace(horizon, oracle_.solve(q)).first;
    }
    WalkResult best;
    for (auto it = cache.begin(); it != cache.end() && it->first <= horizon; ++it) {
      const WalkResult& r = it->second;
      if (r.feasible() && (!best.feasible() || r.reward > best.reward)) best = r;
    }
    return best;
  }

 private:
  const DeadlineOracle& oracle_;
  const Metric& m_;
  std::vector<Target> eligible_;
  std::map<std::tuple<Vertex, std::optional<Vertex>, Rational>, std::map<Rational, WalkResult>>
    cache_;
};

}  // namespace otw
