#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otw/error.hpp"
#include "otw/metric.hpp"
#include "otw/rational.hpp"

namespace otw {

struct TimeWindow {
  Rational release;
  Rational deadline;

  Rational length() const { return deadline - release; }
  bool contains(const Rational& t) const { return release <= t && t <= deadline; }
  bool contains(const TimeWindow& inner) const {
    return release <= inner.release && inner.deadline <= deadline;
  }

  bool operator==(const TimeWindow&) const = default;
};

enum class WaitPolicy { wait, no_wait };

/// An orienteering-with-time-windows instance on a closed metric.
///
/// The walk may be anchored at a start vertex (leaving at time 0), at an end
/// vertex (arriving by `budget`), at both, or at neither. When any anchor is
/// present the last visit must happen by `budget`; a free walk is bounded by
/// the windows alone.
struct TwInstance {
  Metric metric;
  std::vector<TimeWindow> windows;
  std::vector<Rational> rewards;
  std::optional<Vertex> start;
  std::optional<Vertex> end;
  Rational budget;
  WaitPolicy wait_policy = WaitPolicy::wait;

  std::size_t size() const { return metric.size(); }
  bool anchored() const { return start.has_value() && end.has_value(); }
  bool free_endpoints() const { return !start && !end; }
  bool budget_bounded() const { return start.has_value() || end.has_value(); }
  bool claimable(Vertex v) const { return rewards[v] > 0; }

  bool operator==(const TwInstance&) const = default;

  /// Throws a structural error when the fields are inconsistent.
  void validate() const {
    const std::size_t n = size();
    if (windows.size() != n || rewards.size() != n)
      throw Error(ErrorKind::structural, "windows/rewards must have one entry per vertex");
    if (start && *start >= n) throw Error(ErrorKind::structural, "start vertex out of range");
    if (end && *end >= n) throw Error(ErrorKind::structural, "end vertex out of range");
    if (budget < 0) throw Error(ErrorKind::structural, "budget must be nonnegative");
    for (Vertex v = 0; v < n; ++v) {
      if (windows[v].release > windows[v].deadline)
        throw Error(ErrorKind::structural,
                    "vertex " + std::to_string(v) + ": release after deadline");
      if (rewards[v] < 0)
        throw Error(ErrorKind::structural, "vertex " + std::to_string(v) + ": negative reward");
    }
  }
};

/// Builds an instance with unit rewards from a graph; windows default to [0, budget].
inline TwInstance make_instance(const Graph& g, std::vector<TimeWindow> windows,
                                std::optional<Vertex> start, std::optional<Vertex> end,
                                Rational budget) {
  TwInstance x;
  x.metric = metric_closure(g);
  x.windows = std::move(windows);
  x.rewards.assign(g.n, Rational(1));
  x.start = start;
  x.end = end;
  x.budget = budget;
  x.validate();
  return x;
}

struct WindowStats {
  std::optional<Rational> l_min;    // over positive-reward vertices with L(v) > 0
  std::optional<Rational> l_max;
  std::optional<Rational> l_ratio;  // empty when every window has zero length
  Rational d_max;                   // over all positive-reward vertices
};

inline WindowStats window_stats(const TwInstance& x) {
  WindowStats s;
  s.d_max = Rational(0);
  for (Vertex v = 0; v < x.size(); ++v) {
    if (!x.claimable(v)) continue;
    const TimeWindow& w = x.windows[v];
    s.d_max = std::max(s.d_max, w.deadline);
    Rational len = w.length();
    if (len == 0) continue;
    if (!s.l_min || len < *s.l_min) s.l_min = len;
    if (!s.l_max || len > *s.l_max) s.l_max = len;
  }
  if (s.l_min) s.l_ratio = *s.l_max / *s.l_min;
  return s;
}

/// Multiplies every time (windows, budget, distances) by c > 0.
inline TwInstance scale_times(const TwInstance& x, const Rational& c) {
  if (c <= 0) throw Error(ErrorKind::argument, "scale factor must be positive");
  TwInstance y = x;
  for (auto& w : y.windows) w = {w.release * c, w.deadline * c};
  y.budget = x.budget * c;
  for (Vertex u = 0; u < x.size(); ++u)
    for (Vertex v = 0; v < x.size(); ++v)
      if (const auto& e = x.metric.at(u, v)) y.metric.set(u, v, *e * c);
  return y;
}

/// Restricted version: each window replaced by a sub-window. An empty entry
/// drops the vertex (its reward becomes 0, its window is kept).
inline TwInstance restrict(const TwInstance& x,
                           const std::vector<std::optional<TimeWindow>>& new_windows) {
  if (new_windows.size() != x.size())
    throw Error(ErrorKind::argument, "restriction needs one window per vertex");
  TwInstance y = x;
  for (Vertex v = 0; v < x.size(); ++v) {
    const auto& w = new_windows[v];
    if (!w) {
      y.rewards[v] = Rational(0);
      continue;
    }
    if (w->release > w->deadline)
      throw Error(ErrorKind::argument, "vertex " + std::to_string(v) + ": empty window");
    if (!x.windows[v].contains(*w))
      throw Error(ErrorKind::containment,
                  "vertex " + std::to_string(v) + ": window [" + to_string(w->release) + "," +
                    to_string(w->deadline) + "] not inside [" + to_string(x.windows[v].release) +
                    "," + to_string(x.windows[v].deadline) + "]");
    y.windows[v] = *w;
  }
  return y;
}

/// Drops positive-reward vertices that cannot be visited before the budget
/// and clips deadlines to it. Preserves the optimum of budget-bounded walks.
inline TwInstance clamp_to_budget(const TwInstance& x) {
  if (!x.budget_bounded()) return x;
  TwInstance y = x;
  for (Vertex v = 0; v < x.size(); ++v) {
    if (y.windows[v].release > x.budget) {
      y.rewards[v] = Rational(0);
      continue;
    }
    y.windows[v].deadline = std::min(y.windows[v].deadline, x.budget);
  }
  return y;
}

/// Mirrors time around `horizon` (t -> horizon - t): windows are mirrored, the
/// metric transposed and the anchors swapped. Every window must end by the
/// horizon.
inline TwInstance time_reverse(const TwInstance& x, const Rational& horizon) {
  TwInstance y = x;
  for (Vertex v = 0; v < x.size(); ++v) {
    const TimeWindow& w = x.windows[v];
    if (w.deadline > horizon) {
      if (x.claimable(v))
        throw Error(ErrorKind::precondition,
                    "vertex " + std::to_string(v) + ": deadline beyond reversal horizon");
      y.windows[v] = {Rational(0), horizon};
      continue;
    }
    y.windows[v] = {horizon - w.deadline, horizon - w.release};
    if (y.windows[v].release < 0) y.windows[v].release = Rational(0);
  }
  for (Vertex u = 0; u < x.size(); ++u)
    for (Vertex v = 0; v < x.size(); ++v) y.metric.set(u, v, x.metric.at(v, u));
  y.start = x.end;
  y.end = x.start;
  y.budget = horizon;
  return y;
}

struct Step {
  Vertex vertex = 0;
  bool collect = false;

  bool operator==(const Step&) const = default;
};

struct Visit {
  Vertex vertex = 0;
  Rational time;
  bool collect = false;

  bool operator==(const Visit&) const = default;
};

struct WalkSolution {
  std::vector<Visit> schedule;
  std::vector<Vertex> collected;  // ascending
  Rational reward;

  std::vector<Step> steps() const {
    std::vector<Step> out;
    out.reserve(schedule.size());
    for (const Visit& v : schedule) out.push_back({v.vertex, v.collect});
    return out;
  }

  bool operator==(const WalkSolution&) const = default;
};

struct WalkEvaluation {
  bool feasible = true;
  std::string reason;  // set when infeasible
  WalkSolution walk;
};

/// Schedules a visit order and credits rewards.
///
/// Without explicit times the earliest-feasible schedule is used: under
/// wait-allowed a collected vertex is served at max(arrival, release) and must
/// not be late; under no-wait every vertex is served on arrival and a
/// collected visit outside its window is simply not credited. A walk without
/// a start anchor begins at its first vertex at time 0 (or its release if that
/// first visit collects).
inline WalkEvaluation evaluate_walk(const TwInstance& x, std::span<const Step> order,
                                    std::optional<std::span<const Rational>> times = {}) {
  WalkEvaluation out;
  auto fail = [&out](std::string why) {
    out.feasible = false;
    out.reason = std::move(why);
    return out;
  };
  const bool wait = x.wait_policy == WaitPolicy::wait;
  if (times && times->size() != order.size()) return fail("explicit times do not match order");
  if (x.start && (order.empty() || order.front().vertex != *x.start))
    return fail("walk must begin at the start vertex");
  if (x.end && (order.empty() || order.back().vertex != *x.end))
    return fail("walk must finish at the end vertex");

  std::vector<bool> credited(x.size(), false);
  Rational now(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Step& step = order[i];
    if (step.vertex >= x.size()) return fail("vertex out of range");
    const TimeWindow& w = x.windows[step.vertex];
    Rational arrival(0);
    if (i > 0) {
      const auto& leg = x.metric.at(order[i - 1].vertex, step.vertex);
      if (!leg) return fail("no walk from " + std::to_string(order[i - 1].vertex) + " to " +
                            std::to_string(step.vertex));
      arrival = now + *leg;
    }
    Rational time = arrival;
    if (times) {
      time = (*times)[i];
      if (i == 0 && x.start && time != 0) return fail("start vertex must be left at time 0");
      if (time < arrival) return fail("visit " + std::to_string(i) + " earlier than travel allows");
      if (!wait && i > 0 && time != arrival)
        return fail("visit " + std::to_string(i) + " waits under no-wait policy");
      if (i == 0 && time < 0) return fail("negative start time");
    } else if (step.collect && wait) {
      time = std::max(arrival, w.release);
    } else if (step.collect && i == 0 && !x.start) {
      time = std::max(arrival, w.release);
    }
    bool credit = false;
    if (step.collect) {
      if (w.contains(time)) {
        credit = true;
      } else if (wait) {
        return fail("vertex " + std::to_string(step.vertex) + " collected outside its window");
      }
    }
    if (credit && !credited[step.vertex]) {
      credited[step.vertex] = true;
      out.walk.reward += x.rewards[step.vertex];
    }
    out.walk.schedule.push_back({step.vertex, time, step.collect});
    now = time;
  }
  if (x.budget_bounded() && now > x.budget) return fail("walk finishes after the budget");
  for (Vertex v = 0; v < x.size(); ++v)
    if (credited[v]) out.walk.collected.push_back(v);
  return out;
}

inline WalkEvaluation evaluate_walk(const TwInstance& x, const std::vector<Step>& order) {
  return evaluate_walk(x, std::span<const Step>(order));
}

/// Collects every vertex the walk already passes inside its window, without
/// changing the schedule, and clears collect flags on repeat visits.
inline std::vector<Step> harvest(const TwInstance& x, std::vector<Step> order) {
  const bool wait = x.wait_policy == WaitPolicy::wait;
  std::vector<bool> credited(x.size(), false);
  Rational now(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    Step& step = order[i];
    const TimeWindow& w = x.windows[step.vertex];
    Rational arrival = i == 0 ? Rational(0) : now + x.metric.d(order[i - 1].vertex, step.vertex);
    if (step.collect && credited[step.vertex]) step.collect = false;
    if (!step.collect && x.claimable(step.vertex) && !credited[step.vertex] &&
        w.contains(arrival))
      step.collect = true;
    Rational time = arrival;
    if (step.collect && (wait || (i == 0 && !x.start))) time = std::max(arrival, w.release);
    if (step.collect && w.contains(time) && x.claimable(step.vertex))
      credited[step.vertex] = true;
    now = time;
  }
  return order;
}

}  // namespace otw
