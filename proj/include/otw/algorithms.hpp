#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otw/decomposition.hpp"
#include "otw/error.hpp"
#include "otw/instance.hpp"
#include "otw/modular_dp.hpp"
#include "otw/oracles.hpp"

namespace otw {

struct VersionResult {
  std::string family;
  std::string label;
  Rational reward;  // on the original instance, after lifting

  bool operator==(const VersionResult&) const = default;
};

struct SolveReport {
  std::string algorithm;
  WalkSolution walk;
  std::vector<VersionResult> versions;
  std::size_t beta = 0;
  Rational alpha{1};
  Rational bound{1};       // reward >= OPT / bound is guaranteed with exact oracles
  std::string asymptotic;  // the textbook form of the guarantee
  double elapsed_seconds = 0;
};

namespace detail {

/// Re-scores a walk found on a restricted or rescaled copy against `x`.
inline WalkSolution lift(const TwInstance& x, const std::vector<Step>& steps) {
  WalkEvaluation eval = evaluate_walk(x, harvest(x, steps));
  if (!eval.feasible) throw Error(ErrorKind::infeasible, "lifted walk infeasible: " + eval.reason);
  return eval.walk;
}

inline WalkSolution direct_walk(const TwInstance& x) {
  require_feasible_anchors(x);
  std::vector<Step> steps;
  if (x.start) steps.push_back({*x.start, false});
  if (x.end) steps.push_back({*x.end, false});
  return lift(x, steps);
}

inline bool has_zero_windows(const TwInstance& x) {
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v) && x.windows[v].length() == 0) return true;
  return false;
}

/// Same instance with the zero-length-window vertices dropped (or kept alone).
inline TwInstance split_zero_windows(const TwInstance& x, bool keep_zero) {
  TwInstance y = x;
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v) && (x.windows[v].length() == 0) != keep_zero) y.rewards[v] = Rational(0);
  return y;
}

class Collector {
 public:
  Collector(const TwInstance& x, std::string family) : x_(x), family_(std::move(family)) {}

  void offer(const std::string& label, const std::vector<Step>& steps) {
    WalkSolution w = lift(x_, steps);
    versions_.push_back({family_, label, w.reward});
    if (!best_ || w.reward > best_->reward) best_ = std::move(w);
  }

  void merge(const std::vector<VersionResult>& inner) {
    versions_.insert(versions_.end(), inner.begin(), inner.end());
  }

  WalkSolution best() const { return best_ ? *best_ : direct_walk(x_); }
  std::vector<VersionResult> versions() const { return versions_; }

 private:
  const TwInstance& x_;
  std::string family_;
  std::optional<WalkSolution> best_;
  std::vector<VersionResult> versions_;
};

inline SolveReport timed(const std::function<SolveReport()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  SolveReport r = body();
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<Step> reversed(std::vector<Step> steps) {
  std::reverse(steps.begin(), steps.end());
  return steps;
}

inline Rational log_bound(const std::optional<Rational>& l) {
  if (!l || *l <= 1) return Rational(1);
  return Rational(2 * ceil_log2(*l));
}

}  // namespace detail

/// Exact optimum over the zero-length-window vertices alone: with every visit
/// time fixed the problem is a longest path in the DAG of compatible visits.
/// Other positive-reward vertices are ignored (except as harvested passes).
inline WalkSolution zero_window_dp(const TwInstance& x) {
  detail::require_feasible_anchors(x);
  std::vector<Vertex> items;
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v) && x.windows[v].length() == 0) items.push_back(v);
  std::stable_sort(items.begin(), items.end(), [&](Vertex a, Vertex b) {
    return x.windows[a].release < x.windows[b].release;
  });
  auto at = [&](Vertex v) { return x.windows[v].release; };
  auto fits = [&](const std::optional<Rational>& leg, const Rational& from, const Rational& to) {
    return leg && from + *leg <= to;
  };

  const std::size_t k = items.size();
  std::vector<std::optional<Rational>> value(k);
  std::vector<int> parent(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    Vertex v = items[i];
    if (x.start && !fits(x.metric.at(*x.start, v), Rational(0), at(v))) continue;
    value[i] = x.rewards[v];
    for (std::size_t j = 0; j < i; ++j) {
      if (!value[j] || !fits(x.metric.at(items[j], v), at(items[j]), at(v))) continue;
      if (*value[j] + x.rewards[v] > *value[i]) {
        value[i] = *value[j] + x.rewards[v];
        parent[i] = static_cast<int>(j);
      }
    }
  }
  auto closes = [&](std::size_t i) {
    Vertex v = items[i];
    if (x.end) return fits(x.metric.at(v, *x.end), at(v), x.budget);
    if (x.start) return at(v) <= x.budget;
    return true;
  };
  int last = -1;
  for (std::size_t i = 0; i < k; ++i)
    if (value[i] && closes(i) && (last < 0 || *value[i] > *value[static_cast<std::size_t>(last)]))
      last = static_cast<int>(i);

  std::vector<Step> steps;
  for (int i = last; i >= 0; i = parent[static_cast<std::size_t>(i)])
    steps.push_back({items[static_cast<std::size_t>(i)], true});
  std::reverse(steps.begin(), steps.end());
  if (x.start) steps.insert(steps.begin(), Step{*x.start, false});
  if (x.end) steps.push_back({*x.end, false});
  return detail::lift(x, steps);
}

namespace detail {

inline SolveReport integer_endpoints(const TwInstance& x, const OrienteeringOracle& oracle) {
  RestrictedFamily family = dyadic_family(x);
  Collector best(x, "dyadic");
  for (const auto& version : family.versions)
    best.offer(version.label,
               solve_reward_indexed(version.instance, partition_by_window(version.instance), oracle)
                 .steps());
  SolveReport r;
  r.algorithm = "integer-endpoints";
  r.walk = best.best();
  r.versions = best.versions();
  r.beta = family.beta();
  r.alpha = oracle.spec().ratio;
  r.bound = log_bound(window_stats(x).l_max) * r.alpha;
  r.asymptotic = "O(log L_max)";
  return r;
}

/// Release groups of a version, solved by composing deadline-oracle walks.
inline std::vector<Step> release_side(const TwInstance& version, const DeadlineOracle& oracle) {
  return solve_release_groups(version, oracle).steps();
}

/// Deadline side, solved on the mirrored instance where deadlines become
/// releases, then read backwards.
inline std::vector<Step> deadline_side(const TwInstance& version, const DeadlineOracle& oracle) {
  TwInstance clamped = clamp_to_budget(version);
  Rational horizon = clamped.budget_bounded() ? clamped.budget : window_stats(clamped).d_max;
  TwInstance mirror = time_reverse(clamped, horizon);
  if (!clamped.budget_bounded()) {
    // free walks stay free after mirroring
    mirror.start.reset();
    mirror.end.reset();
  }
  return reversed(solve_release_groups(mirror, oracle).steps());
}

inline SolveReport l_le_2(const TwInstance& x, const OrienteeringOracle& oracle,
                          const DeadlineOracle& deadline_oracle) {
  RestrictedFamily family = three_split_floor(x);
  Collector best(x, "three-split-floor");
  for (const auto& version : family.versions) {
    const TwInstance& b = version.instance;
    if (version.label == "B2")
      best.offer("B2", solve_reward_indexed(b, partition_by_window(b), oracle).steps());
    else if (version.label == "B3")
      best.offer("B3", release_side(b, deadline_oracle));
    else
      best.offer("B1", deadline_side(b, deadline_oracle));
  }
  SolveReport r;
  r.algorithm = "l2";
  r.walk = best.best();
  r.versions = best.versions();
  r.beta = family.beta();
  r.alpha = std::max(oracle.spec().ratio, deadline_oracle.spec().ratio);
  r.bound = Rational(3) * r.alpha;
  r.asymptotic = "O(log n)";
  return r;
}

inline SolveReport general(const TwInstance& x, const OrienteeringOracle& oracle,
                           const DeadlineOracle& deadline_oracle) {
  RestrictedFamily family = three_split_ceil(x);
  Collector best(x, "three-split-ceil");
  for (const auto& version : family.versions) {
    SolveReport inner = version.label == "B2"
                          ? integer_endpoints(version.instance, oracle)
                          : l_le_2(version.instance, oracle, deadline_oracle);
    best.merge(inner.versions);
    best.offer(version.label, inner.walk.steps());
  }
  SolveReport r;
  r.algorithm = "general";
  r.walk = best.best();
  r.versions = best.versions();
  r.beta = family.beta();
  r.alpha = std::max(oracle.spec().ratio, deadline_oracle.spec().ratio);
  r.bound = Rational(3) * log_bound(window_stats(x).l_ratio) * r.alpha;
  r.asymptotic = "max{O(log n), O(log L)}";
  return r;
}

/// Version whose windows are the half-grid piece at `pick(pieces)`.
template <typename Pick>
inline TwInstance half_grid_version(const TwInstance& base, Pick pick) {
  std::vector<std::optional<TimeWindow>> windows(base.size());
  for (Vertex v = 0; v < base.size(); ++v) {
    if (!base.claimable(v) || base.windows[v].length() == 0) continue;
    std::vector<TimeWindow> pieces = half_grid_pieces(base.windows[v]);
    windows[v] = pick(pieces);
  }
  return restrict(base, windows);
}

inline SolveReport free_l_le_2(const TwInstance& x, const OrienteeringOracle& oracle) {
  if (x.budget_bounded())
    throw Error(ErrorKind::precondition, "free-endpoint algorithms need an instance without s/t");
  RestrictedFamily family = five_split(x);
  Collector best(x, "five-split");
  auto modular = [&](const TwInstance& b) {
    return solve_reward_indexed(b, partition_by_window(b), oracle).steps();
  };
  // A walk collecting first pieces still works half a unit later, when
  // every window (length >= 1) is on its second piece; symmetrically for last
  // pieces half a unit earlier. Both shifted versions are modular.
  best.offer("B1'", modular(half_grid_version(family.base, [](const auto& p) { return p[1]; })));
  for (const auto& version : family.versions)
    if (version.label != "B1" && version.label != "B5")
      best.offer(version.label, modular(version.instance));
  best.offer("B5'", modular(half_grid_version(family.base,
                                                [](const auto& p) { return p[p.size() - 2]; })));
  SolveReport r;
  r.algorithm = "free-l2";
  r.walk = best.best();
  r.versions = best.versions();
  r.beta = 5;
  r.alpha = oracle.spec().ratio;
  r.bound = Rational(5) * r.alpha;
  r.asymptotic = "O(1)";
  return r;
}

inline SolveReport free_general(const TwInstance& x, const OrienteeringOracle& oracle) {
  if (x.budget_bounded())
    throw Error(ErrorKind::precondition, "free-endpoint algorithms need an instance without s/t");
  WindowStats stats = window_stats(x);
  std::map<int, std::vector<std::optional<TimeWindow>>> bands;
  for (Vertex v = 0; v < x.size(); ++v) {
    if (!x.claimable(v) || x.windows[v].length() == 0) continue;
    int j = floor_log2(x.windows[v].length() / *stats.l_min);
    auto [it, fresh] = bands.try_emplace(j);
    if (fresh) it->second.assign(x.size(), std::nullopt);
    it->second[v] = x.windows[v];
  }
  Collector best(x, "length-bands");
  for (const auto& [j, windows] : bands) {
    SolveReport inner = free_l_le_2(restrict(x, windows), oracle);
    best.merge(inner.versions);
    best.offer("band_" + std::to_string(j), inner.walk.steps());
  }
  SolveReport r;
  r.algorithm = "free-general";
  r.walk = best.best();
  r.versions = best.versions();
  r.beta = bands.size();
  r.alpha = oracle.spec().ratio;
  int bands_bound = stats.l_ratio ? ceil_log2(*stats.l_ratio) + 1 : 1;
  r.bound = Rational(5 * bands_bound) * r.alpha;
  r.asymptotic = "O(log L)";
  return r;
}

/// Runs `main` on the positive-length part and keeps the zero-window DP
/// answer when it is better.
inline SolveReport with_zero_windows(const TwInstance& x,
                                     const std::function<SolveReport(const TwInstance&)>& main) {
  if (!has_zero_windows(x)) return main(x);
  SolveReport r = main(split_zero_windows(x, false));
  WalkSolution zero = zero_window_dp(x);
  r.versions.push_back({"zero-window", "Z", zero.reward});
  r.walk = lift(x, r.walk.steps());
  if (zero.reward > r.walk.reward) r.walk = zero;
  // OPT <= bound * main + zero, so the better of the two is within bound + 1
  r.bound += 1;
  return r;
}

}  // namespace detail

/// Integer window endpoints: one modular version per dyadic (slot, level).
inline SolveReport solve_integer_endpoints(const TwInstance& x, const OrienteeringOracle& oracle) {
  return detail::timed([&] {
    return detail::with_zero_windows(
      x, [&](const TwInstance& y) { return detail::integer_endpoints(y, oracle); });
  });
}

/// Window lengths within a factor 2: the floor three-way split, with the
/// middle version modular and the outer ones composed from deadline walks.
inline SolveReport solve_l_le_2(const TwInstance& x, const OrienteeringOracle& oracle,
                                const DeadlineOracle& deadline_oracle) {
  return detail::timed([&] {
    return detail::with_zero_windows(
      x, [&](const TwInstance& y) { return detail::l_le_2(y, oracle, deadline_oracle); });
  });
}

/// Arbitrary windows: the ceil three-way split, outer versions through
/// solve_l_le_2 and the integral middle through solve_integer_endpoints.
inline SolveReport solve_general(const TwInstance& x, const OrienteeringOracle& oracle,
                                 const DeadlineOracle& deadline_oracle) {
  return detail::timed([&] {
    return detail::with_zero_windows(
      x, [&](const TwInstance& y) { return detail::general(y, oracle, deadline_oracle); });
  });
}

inline SolveReport solve_free_l_le_2(const TwInstance& x, const OrienteeringOracle& oracle) {
  return detail::timed([&] {
    return detail::with_zero_windows(
      x, [&](const TwInstance& y) { return detail::free_l_le_2(y, oracle); });
  });
}

/// Free endpoints, any L: vertices grouped into length bands [2^j, 2^(j+1))
/// relative to L_min, each band solved as an L <= 2 instance.
inline SolveReport solve_free_general(const TwInstance& x, const OrienteeringOracle& oracle) {
  return detail::timed([&] {
    return detail::with_zero_windows(
      x, [&](const TwInstance& y) { return detail::free_general(y, oracle); });
  });
}

/// Deadline instance to time-window instance: a new start s' joined to s by
/// an edge of length D_max; deadlines and the budget grow by D_max, so every
/// window length lies in [D_max, 2 D_max]. The new start is the last vertex.
inline TwInstance reduce_deadline_to_tw(const TwInstance& x) {
  if (!x.start) throw Error(ErrorKind::precondition, "deadline instances need a start vertex");
  for (Vertex v = 0; v < x.size(); ++v)
    if (x.claimable(v) && x.windows[v].release != 0)
      throw Error(ErrorKind::precondition,
                  "vertex " + std::to_string(v) + " has a nonzero release time");
  const Rational d_max = window_stats(x).d_max;
  const std::size_t n = x.size();
  const Vertex s = *x.start, fresh = n;
  TwInstance y;
  y.metric = Metric(x.metric.directed(), n + 1);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) y.metric.set(u, v, x.metric.at(u, v));
  for (Vertex v = 0; v < n; ++v) {
    if (const auto& out = x.metric.at(s, v)) y.metric.set(fresh, v, d_max + *out);
    if (!x.metric.directed())
      if (const auto& back = x.metric.at(v, s)) y.metric.set(v, fresh, *back + d_max);
  }
  for (Vertex v = 0; v < n; ++v) y.windows.push_back({Rational(0), x.windows[v].deadline + d_max});
  y.windows.push_back({Rational(0), d_max});
  y.rewards = x.rewards;
  y.rewards.push_back(Rational(0));
  y.start = fresh;
  y.end = x.end;
  y.budget = x.budget + d_max;
  y.wait_policy = x.wait_policy;
  return y;
}

enum class Algorithm { integer_endpoints, l2, general, free_l2, free_general, auto_select };

inline std::optional<Algorithm> parse_algorithm(const std::string& name) {
  static const std::map<std::string, Algorithm> names{
    {"integer-endpoints", Algorithm::integer_endpoints},
    {"l2", Algorithm::l2},
    {"general", Algorithm::general},
    {"free-l2", Algorithm::free_l2},
    {"free-general", Algorithm::free_general},
    {"auto", Algorithm::auto_select}};
  auto it = names.find(name);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

/// Picks the applicable algorithms from integrality, L and anchoring, plus
/// the zero-window DP, and returns the best report (earlier wins ties).
inline SolveReport solve_auto(const TwInstance& x, const OrienteeringOracle& oracle,
                              const DeadlineOracle& deadline_oracle) {
  return detail::timed([&] {
    std::vector<SolveReport> runs;
    WindowStats stats = window_stats(x);
    if (x.free_endpoints()) {
      runs.push_back(solve_free_general(x, oracle));
    } else {
      bool integral = true;
      for (Vertex v = 0; v < x.size(); ++v)
        if (x.claimable(v))
          integral = integral && is_integer(x.windows[v].release) && is_integer(x.windows[v].deadline);
      if (integral) runs.push_back(solve_integer_endpoints(x, oracle));
      if (stats.l_ratio && *stats.l_ratio <= 2) runs.push_back(solve_l_le_2(x, oracle, deadline_oracle));
      runs.push_back(solve_general(x, oracle, deadline_oracle));
    }
    SolveReport r;
    r.algorithm = "auto";
    r.walk = zero_window_dp(x);
    r.versions.push_back({"zero-window", "Z", r.walk.reward});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const SolveReport& run = runs[i];
      r.versions.insert(r.versions.end(), run.versions.begin(), run.versions.end());
      if (run.walk.reward > r.walk.reward) r.walk = run.walk;
      if (i == 0 || run.bound < r.bound) {
        r.bound = run.bound;
        r.beta = run.beta;
        r.alpha = run.alpha;
        r.asymptotic = run.asymptotic;
      }
    }
    return r;
  });
}

inline SolveReport solve(Algorithm a, const TwInstance& x, const OrienteeringOracle& oracle,
                         const DeadlineOracle& deadline_oracle) {
  switch (a) {
    case Algorithm::integer_endpoints: return solve_integer_endpoints(x, oracle);
    case Algorithm::l2: return solve_l_le_2(x, oracle, deadline_oracle);
    case Algorithm::general: return solve_general(x, oracle, deadline_oracle);
    case Algorithm::free_l2: return solve_free_l_le_2(x, oracle);
    case Algorithm::free_general: return solve_free_general(x, oracle);
    case Algorithm::auto_select: break;
  }
  return solve_auto(x, oracle, deadline_oracle);
}

}  // namespace otw
