#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "otw/error.hpp"
#include "otw/instance.hpp"
#include "otw/oracles.hpp"

namespace otw {

/// A group of vertices served entirely inside [release, deadline].
struct ModularBlock {
  std::vector<Vertex> members;
  Rational release;
  Rational deadline;
};

struct ModularPartition {
  std::vector<ModularBlock> blocks;
};

struct ModularCheck {
  bool ok = true;
  std::string diagnostic;  // first violated condition
};

/// Checks block containment (R(v) <= R_i, D(v) >= D_i), block ordering
/// (D_i <= R_{i+1}; a shared endpoint is allowed) and that every
/// positive-reward vertex sits in exactly one block.
inline ModularCheck verify_modular(const TwInstance& x, const ModularPartition& p) {
  auto fail = [](std::string why) { return ModularCheck{false, std::move(why)}; };
  std::vector<int> owner(x.size(), 0);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const ModularBlock& b = p.blocks[i];
    if (b.release > b.deadline)
      return fail("containment: block " + std::to_string(i) + " has release after deadline");
    for (Vertex v : b.members) {
      if (v >= x.size()) return fail("assignment: vertex out of range in block " + std::to_string(i));
      const TimeWindow& w = x.windows[v];
      if (w.release > b.release || w.deadline < b.deadline)
        return fail("containment: vertex " + std::to_string(v) + " window does not contain block " +
                    std::to_string(i));
      ++owner[v];
    }
    if (i + 1 < p.blocks.size() && b.deadline > p.blocks[i + 1].release)
      return fail("ordering: block " + std::to_string(i) + " ends after block " +
                  std::to_string(i + 1) + " starts");
  }
  for (Vertex v = 0; v < x.size(); ++v) {
    if (owner[v] > 1) return fail("assignment: vertex " + std::to_string(v) + " in several blocks");
    if (owner[v] == 0 && x.claimable(v))
      return fail("assignment: vertex " + std::to_string(v) + " in no block");
  }
  return {};
}

/// Groups positive-reward vertices by identical window, ordered by time. The
/// result is a modular partition whenever distinct windows are disjoint.
inline ModularPartition partition_by_window(const TwInstance& x) {
  std::map<std::pair<Rational, Rational>, std::vector<Vertex>> groups;
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v)) groups[{x.windows[v].release, x.windows[v].deadline}].push_back(v);
  ModularPartition p;
  for (auto& [w, members] : groups) p.blocks.push_back({members, w.first, w.second});
  return p;
}

/// Smallest reward grain: every reward is an integer multiple of it.
inline Rational reward_unit(const TwInstance& x) {
  Rational g(0);
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v)) g = rational_gcd(g, x.rewards[v]);
  return g == 0 ? Rational(1) : g;
}

struct BlockTime {
  Rational duration;
  WalkResult walk;
};

/// Binary search over the block's candidate durations for the shortest
/// budget at which the (monotone-wrapped) oracle collects at least
/// `target / ratio`. Never longer than the shortest walk that truly collects
/// `target`. Empty when no duration up to `span` suffices.
inline std::optional<BlockTime> block_min_time(MonotoneOrienteering& oracle, const Metric& m,
                                               const ModularBlock& block, Vertex u, Vertex v,
                                               const Rational& target, const Rational& span) {
  if (target < 0) throw Error(ErrorKind::argument, "block_min_time needs k >= 0");
  if (!m.reachable(u, v) || m.d(u, v) > span) return std::nullopt;
  if (target == 0) {
    WalkResult direct;
    direct.order = u == v ? std::vector<Vertex>{u} : std::vector<Vertex>{u, v};
    direct.duration = m.d(u, v);
    direct.reward = credited_reward(m, oracle.eligible(), direct.order, Rational(0));
    return BlockTime{direct.duration, direct};
  }
  std::vector<Vertex> items;
  for (Vertex w : block.members)
    if (w != u && w != v) items.push_back(w);
  std::vector<Rational> grid;
  for (const Rational& t : subset_length_grid(m, items, u, v))
    if (t <= span) grid.push_back(t);
  const Rational needed = target / oracle.spec().ratio;
  auto good = [&](std::size_t i) { return oracle.query(u, v, grid[i]).reward >= needed; };
  if (grid.empty() || !good(grid.size() - 1)) return std::nullopt;
  std::ptrdiff_t lo = -1, hi = static_cast<std::ptrdiff_t>(grid.size()) - 1;
  while (hi - lo > 1) {
    std::ptrdiff_t mid = lo + (hi - lo) / 2;
    if (good(static_cast<std::size_t>(mid)))
      hi = mid;
    else
      lo = mid;
  }
  const Rational& t = grid[static_cast<std::size_t>(hi)];
  return BlockTime{t, oracle.query(u, v, t)};
}

namespace detail {

inline constexpr Vertex no_vertex = std::numeric_limits<Vertex>::max();

struct Segment {
  std::vector<Step> steps;  // first step is the entry vertex
  Rational exit_time;
};

/// One block of a reward-indexed composition: the cheapest way to collect
/// `units` reward units between entry u and exit v, given the arrival time.
class SegmentSolver {
 public:
  virtual ~SegmentSolver() = default;
  virtual const std::vector<Vertex>& members() const = 0;
  virtual std::int64_t max_units() const = 0;
  virtual std::optional<Segment> min_exit(Vertex u, Vertex v, const Rational& arrival,
                                          std::int64_t units) = 0;
};

/// Flags the first visit of each credited target along `order` started at
/// `start_time`.
inline std::vector<Step> flag_walk(const Metric& m, const std::vector<Target>& eligible,
                                   const std::vector<Vertex>& order, const Rational& start_time) {
  std::map<Vertex, const Target*> lookup;
  for (const Target& t : eligible) lookup[t.vertex] = &t;
  std::vector<Step> steps;
  std::vector<Vertex> seen;
  Rational now = start_time;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) now += m.d(order[i - 1], order[i]);
    bool flag = false;
    auto it = lookup.find(order[i]);
    if (it != lookup.end() && it->second->reward > 0 &&
        std::find(seen.begin(), seen.end(), order[i]) == seen.end() &&
        (!it->second->deadline || now <= *it->second->deadline)) {
      flag = true;
      seen.push_back(order[i]);
    }
    steps.push_back({order[i], flag});
  }
  return steps;
}

inline std::vector<Target> block_targets(const TwInstance& x, const std::vector<Vertex>& members,
                                         bool with_deadlines) {
  std::vector<Target> out;
  for (Vertex v : members) {
    Target t{v, x.rewards[v], std::nullopt};
    if (with_deadlines) t.deadline = x.windows[v].deadline;
    out.push_back(t);
  }
  return out;
}

inline std::int64_t units_of(const Rational& reward, const Rational& unit) {
  Rational q = reward / unit;
  return q.numerator() / q.denominator();
}

/// Orienteering block: enter no earlier than R_i, leave by D_i.
class OrienteeringSegments : public SegmentSolver {
 public:
  OrienteeringSegments(const TwInstance& x, const ModularBlock& block,
                       const OrienteeringOracle& oracle, Rational unit)
    : x_(x), block_(block), oracle_(oracle, x.metric, block_targets(x, block.members, false)),
      unit_(unit) {
    Rational total(0);
    for (Vertex v : block.members) total += x.rewards[v];
    max_units_ = units_of(total, unit);
  }

  const std::vector<Vertex>& members() const override { return block_.members; }
  std::int64_t max_units() const override { return max_units_; }

  std::optional<Segment> min_exit(Vertex u, Vertex v, const Rational& arrival,
                                  std::int64_t units) override {
    Rational entry = std::max(arrival, block_.release);
    if (entry > block_.deadline) return std::nullopt;
    auto key = std::make_tuple(u, v, units);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_
             .emplace(key, block_min_time(oracle_, x_.metric, block_, u, v, unit_ * units,
                                          block_.deadline - block_.release))
             .first;
    }
    if (!it->second) return std::nullopt;
    Rational exit = entry + it->second->duration;
    if (exit > block_.deadline) return std::nullopt;
    return Segment{flag_walk(x_.metric, oracle_.eligible(), it->second->walk.order, Rational(0)),
                   exit};
  }

 private:
  const TwInstance& x_;
  ModularBlock block_;
  MonotoneOrienteering oracle_;
  Rational unit_;
  std::int64_t max_units_ = 0;
  std::map<std::tuple<Vertex, Vertex, std::int64_t>, std::optional<BlockTime>> cache_;
};

/// Release group: members share a release time and keep their own deadlines,
/// so each block is a deadline-orienteering problem entered at some time.
class DeadlineSegments : public SegmentSolver {
 public:
  DeadlineSegments(const TwInstance& x, ModularBlock group, const DeadlineOracle& oracle,
                   Rational unit)
    : x_(x), group_(std::move(group)),
      oracle_(oracle, x.metric, block_targets(x, group_.members, true)), unit_(unit) {
    Rational total(0);
    for (Vertex v : group_.members) total += x.rewards[v];
    max_units_ = units_of(total, unit);
  }

  const std::vector<Vertex>& members() const override { return group_.members; }
  std::int64_t max_units() const override { return max_units_; }

  std::optional<Segment> min_exit(Vertex u, Vertex v, const Rational& arrival,
                                  std::int64_t units) override {
    Rational entry = std::max(arrival, group_.release);
    if (entry > x_.windows[u].deadline) return std::nullopt;
    const Rational needed = unit_ * units / oracle_.spec().ratio;
    const std::vector<Rational>& lengths = grid(u, v);
    std::vector<Rational> horizons;
    for (const Rational& len : lengths)
      if (entry + len <= x_.windows[v].deadline) horizons.push_back(entry + len);
    auto good = [&](std::size_t i) {
      return oracle_.query(u, entry, v, horizons[i]).reward >= needed;
    };
    if (horizons.empty() || !good(horizons.size() - 1)) return std::nullopt;
    std::ptrdiff_t lo = -1, hi = static_cast<std::ptrdiff_t>(horizons.size()) - 1;
    while (hi - lo > 1) {
      std::ptrdiff_t mid = lo + (hi - lo) / 2;
      if (good(static_cast<std::size_t>(mid)))
        hi = mid;
      else
        lo = mid;
    }
    WalkResult walk = oracle_.query(u, entry, v, horizons[static_cast<std::size_t>(hi)]);
    return Segment{flag_walk(x_.metric, oracle_.eligible(), walk.order, entry),
                   entry + walk.duration};
  }

 private:
  const std::vector<Rational>& grid(Vertex u, Vertex v) {
    auto key = std::make_pair(u, v);
    auto it = grids_.find(key);
    if (it == grids_.end()) {
      std::vector<Vertex> items;
      for (Vertex w : group_.members)
        if (w != u && w != v) items.push_back(w);
      it = grids_.emplace(key, ordering_length_grid(x_.metric, items, u, v)).first;
    }
    return it->second;
  }

  const TwInstance& x_;
  ModularBlock group_;
  MonotoneDeadline oracle_;
  Rational unit_;
  std::int64_t max_units_ = 0;
  std::map<std::pair<Vertex, Vertex>, std::vector<Rational>> grids_;
};

struct ComposeNode {
  Vertex pos = no_vertex;
  Rational time;
  std::int64_t units = 0;
  Rational reward;  // used by the time-indexed and Pareto compositions
  int parent = -1;
  std::vector<Step> segment;
};

inline std::optional<Rational> leg(const TwInstance& x, Vertex from, Vertex to) {
  if (from == no_vertex) return Rational(0);
  return x.metric.at(from, to);
}

inline bool can_finish(const TwInstance& x, const ComposeNode& node) {
  if (x.end) {
    if (node.pos == no_vertex) return true;
    const auto& l = x.metric.at(node.pos, *x.end);
    return l && node.time + *l <= x.budget;
  }
  if (x.start) return node.time <= x.budget;
  return true;
}

inline std::vector<Step> unwind(const TwInstance& x, const std::vector<ComposeNode>& arena,
                                int index) {
  std::vector<int> chain;
  for (int i = index; i >= 0; i = arena[static_cast<std::size_t>(i)].parent) chain.push_back(i);
  std::vector<Step> steps;
  if (x.start) steps.push_back({*x.start, false});
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& seg = arena[static_cast<std::size_t>(*it)].segment;
    steps.insert(steps.end(), seg.begin(), seg.end());
  }
  if (x.end) steps.push_back({*x.end, false});
  return steps;
}

/// Evaluates each candidate end state and keeps the best feasible walk.
inline WalkSolution best_final(const TwInstance& x, const std::vector<ComposeNode>& arena,
                               const std::vector<int>& finals) {
  std::optional<WalkSolution> best;
  for (int index : finals) {
    WalkEvaluation eval = evaluate_walk(x, unwind(x, arena, index));
    if (!eval.feasible) continue;
    if (!best || eval.walk.reward > best->reward) best = std::move(eval.walk);
  }
  if (!best) throw Error(ErrorKind::infeasible, "no feasible composed walk");
  return *best;
}

inline void require_feasible_anchors(const TwInstance& x) {
  if (x.start && x.end) {
    const auto& direct = x.metric.at(*x.start, *x.end);
    if (!direct || *direct > x.budget)
      throw Error(ErrorKind::infeasible, "end vertex cannot be reached within the budget");
  }
}

/// Reward-indexed composition: for every (position, collected units) keep the
/// earliest time it can be reached; blocks are processed in order and may be
/// skipped.
inline WalkSolution compose_reward_indexed(
  const TwInstance& x, std::vector<std::unique_ptr<SegmentSolver>>& blocks) {
  require_feasible_anchors(x);
  std::vector<ComposeNode> arena;
  std::map<std::pair<Vertex, std::int64_t>, int> state;
  arena.push_back({x.start.value_or(no_vertex), Rational(0), 0, Rational(0), -1, {}});
  state[{arena[0].pos, 0}] = 0;

  for (auto& block : blocks) {
    auto snapshot = state;
    for (const auto& [key, index] : snapshot) {
      const ComposeNode from = arena[static_cast<std::size_t>(index)];
      for (Vertex u : block->members()) {
        auto l = leg(x, from.pos, u);
        if (!l) continue;
        Rational arrival = from.time + *l;
        for (Vertex v : block->members()) {
          for (std::int64_t k = 1; k <= block->max_units(); ++k) {
            auto seg = block->min_exit(u, v, arrival, k);
            if (!seg) continue;
            std::pair<Vertex, std::int64_t> to_key{v, from.units + k};
            auto it = state.find(to_key);
            if (it != state.end() && arena[static_cast<std::size_t>(it->second)].time <= seg->exit_time)
              continue;
            arena.push_back({v, seg->exit_time, from.units + k, Rational(0), index,
                             std::move(seg->steps)});
            state[to_key] = static_cast<int>(arena.size()) - 1;
          }
        }
      }
    }
  }

  std::vector<int> finals;
  for (const auto& [key, index] : state)
    if (can_finish(x, arena[static_cast<std::size_t>(index)])) finals.push_back(index);
  return best_final(x, arena, finals);
}

}  // namespace detail

/// Reward-indexed DP over a modular partition. Per block it guesses the entry
/// and exit vertices and the reward collected there, and asks the oracle (via
/// binary search) for the shortest walk achieving that reward up to its ratio.
inline WalkSolution solve_reward_indexed(const TwInstance& x, const ModularPartition& p,
                                         const OrienteeringOracle& oracle) {
  ModularCheck check = verify_modular(x, p);
  if (!check.ok) throw Error(ErrorKind::precondition, "not modular: " + check.diagnostic);
  Rational unit = reward_unit(x);
  std::vector<std::unique_ptr<detail::SegmentSolver>> blocks;
  for (const ModularBlock& b : p.blocks)
    if (!b.members.empty())
      blocks.push_back(std::make_unique<detail::OrienteeringSegments>(x, b, oracle, unit));
  return detail::compose_reward_indexed(x, blocks);
}

/// Partition of positive-reward vertices by common release time, ordered by
/// time. Each group's block deadline is its latest member deadline.
inline ModularPartition partition_by_release(const TwInstance& x) {
  std::map<Rational, std::vector<Vertex>> groups;
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v)) groups[x.windows[v].release].push_back(v);
  ModularPartition p;
  for (auto& [release, members] : groups) {
    Rational last = release;
    for (Vertex v : members) last = std::max(last, x.windows[v].deadline);
    p.blocks.push_back({members, release, last});
  }
  return p;
}

/// Composes deadline-orienteering solutions over release groups. Needs every
/// group to finish by the next group's release.
inline WalkSolution solve_release_groups(const TwInstance& x, const DeadlineOracle& oracle) {
  ModularPartition p = partition_by_release(x);
  for (std::size_t i = 0; i + 1 < p.blocks.size(); ++i)
    if (p.blocks[i].deadline > p.blocks[i + 1].release)
      throw Error(ErrorKind::precondition, "release groups overlap in time");
  Rational unit = reward_unit(x);
  std::vector<std::unique_ptr<detail::SegmentSolver>> blocks;
  for (const ModularBlock& b : p.blocks)
    blocks.push_back(std::make_unique<detail::DeadlineSegments>(x, b, oracle, unit));
  return detail::compose_reward_indexed(x, blocks);
}

/// Time-indexed DP for integral data: the best reward of a prefix that leaves
/// block i at vertex v at time T, built from per-block oracle answers
/// OPT(u, v, t) for every integral budget t.
inline WalkSolution solve_time_indexed(const TwInstance& x, const ModularPartition& p,
                                       const OrienteeringOracle& oracle) {
  ModularCheck check = verify_modular(x, p);
  if (!check.ok) throw Error(ErrorKind::precondition, "not modular: " + check.diagnostic);
  auto integral = [](const Rational& r) { return is_integer(r); };
  bool ok = integral(x.budget);
  for (const ModularBlock& b : p.blocks) ok = ok && integral(b.release) && integral(b.deadline);
  for (Vertex u = 0; u < x.size() && ok; ++u)
    for (Vertex v = 0; v < x.size() && ok; ++v)
      if (const auto& e = x.metric.at(u, v)) ok = integral(*e);
  if (!ok)
    throw Error(ErrorKind::precondition,
                "time-indexed DP needs integral data; use solve_reward_indexed");
  detail::require_feasible_anchors(x);

  using detail::ComposeNode;
  std::vector<ComposeNode> arena;
  std::map<std::pair<Vertex, Rational>, int> state;  // (position, time) -> best node
  arena.push_back({x.start.value_or(detail::no_vertex), Rational(0), 0, Rational(0), -1, {}});
  state[{arena[0].pos, Rational(0)}] = 0;

  for (const ModularBlock& block : p.blocks) {
    if (block.members.empty()) continue;
    MonotoneOrienteering table(oracle, x.metric, detail::block_targets(x, block.members, false));
    auto snapshot = state;
    for (const auto& [key, index] : snapshot) {
      const ComposeNode from = arena[static_cast<std::size_t>(index)];
      for (Vertex u : block.members) {
        auto l = detail::leg(x, from.pos, u);
        if (!l) continue;
        Rational entry = std::max(from.time + *l, block.release);
        for (Rational t(0); entry + t <= block.deadline; t += 1) {
          for (Vertex v : block.members) {
            WalkResult r = table.query(u, v, t);
            if (!r.feasible()) continue;
            Rational exit = entry + t;
            Rational reward = from.reward + r.reward;
            std::pair<Vertex, Rational> to_key{v, exit};
            auto it = state.find(to_key);
            if (it != state.end() && arena[static_cast<std::size_t>(it->second)].reward >= reward)
              continue;
            arena.push_back({v, exit, 0, reward, index,
                             detail::flag_walk(x.metric, table.eligible(), r.order, Rational(0))});
            state[to_key] = static_cast<int>(arena.size()) - 1;
          }
        }
      }
    }
  }
  std::vector<int> finals;
  for (const auto& [key, index] : state)
    if (detail::can_finish(x, arena[static_cast<std::size_t>(index)])) finals.push_back(index);
  return detail::best_final(x, arena, finals);
}

/// Exact composition: per block, the full Pareto profile of (duration,
/// reward) for every entry/exit pair, merged block by block over
/// nondominated (time, reward) labels at each position.
inline WalkSolution solve_exact_pareto(const TwInstance& x, const ModularPartition& p) {
  ModularCheck check = verify_modular(x, p);
  if (!check.ok) throw Error(ErrorKind::precondition, "not modular: " + check.diagnostic);
  detail::require_feasible_anchors(x);

  using detail::ComposeNode;
  std::vector<ComposeNode> arena;
  std::map<Vertex, std::vector<int>> labels;
  arena.push_back({x.start.value_or(detail::no_vertex), Rational(0), 0, Rational(0), -1, {}});
  labels[arena[0].pos].push_back(0);

  auto insert = [&](ComposeNode node) {
    auto& bucket = labels[node.pos];
    for (int i : bucket) {
      const ComposeNode& o = arena[static_cast<std::size_t>(i)];
      if (o.time <= node.time && o.reward >= node.reward) return;
    }
    std::erase_if(bucket, [&](int i) {
      const ComposeNode& o = arena[static_cast<std::size_t>(i)];
      return node.time <= o.time && node.reward >= o.reward;
    });
    arena.push_back(std::move(node));
    bucket.push_back(static_cast<int>(arena.size()) - 1);
  };

  for (const ModularBlock& block : p.blocks) {
    if (block.members.empty()) continue;
    std::vector<Target> targets = detail::block_targets(x, block.members, false);
    std::map<std::pair<Vertex, Vertex>, ParetoProfile> profiles;
    for (Vertex u : block.members)
      for (Vertex v : block.members)
        profiles[{u, v}] = pareto_profiles(x.metric, targets, u, v, block.deadline - block.release);
    auto snapshot = labels;
    for (const auto& [pos, bucket] : snapshot) {
      for (int index : bucket) {
        const ComposeNode from = arena[static_cast<std::size_t>(index)];
        for (Vertex u : block.members) {
          auto l = detail::leg(x, from.pos, u);
          if (!l) continue;
          Rational entry = std::max(from.time + *l, block.release);
          if (entry > block.deadline) continue;
          for (Vertex v : block.members) {
            for (const ParetoEntry& e : profiles[{u, v}].entries) {
              if (entry + e.duration > block.deadline) break;
              insert({v, entry + e.duration, 0, from.reward + e.reward, index,
                      detail::flag_walk(x.metric, targets, e.witness, Rational(0))});
            }
          }
        }
      }
    }
  }
  std::vector<int> finals;
  for (const auto& [pos, bucket] : labels)
    for (int index : bucket)
      if (detail::can_finish(x, arena[static_cast<std::size_t>(index)])) finals.push_back(index);
  return detail::best_final(x, arena, finals);
}

}  // namespace otw
