#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "otw/error.hpp"
#include "otw/instance.hpp"

namespace otw {

struct GenSpec {
  std::string family = "line";  // line, euclidean-grid, random-metric, directed-random
  std::size_t n = 6;
  Rational len_lo{1};
  Rational len_hi{2};
  Rational horizon{10};
  std::uint64_t seed = 0;
  std::int64_t grain = 1;       // times are multiples of 1/grain
  std::int64_t max_weight = 3;  // travel times drawn from 1..max_weight
  std::int64_t max_reward = 1;  // rewards drawn from 1..max_reward
  bool free_endpoints = false;  // no s/t; otherwise s = 0, t = n-1 with reward 0
};

namespace detail {

/// Uniform integer in [lo, hi] by rejection, so the stream of values depends
/// only on the 64-bit engine and not on the standard library.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

inline std::int64_t isqrt_ceil(std::int64_t v) {
  std::int64_t r = 0;
  while (r * r < v) ++r;
  return r;
}

inline Graph generate_graph(const GenSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.n;
  Graph g{spec.family == "directed-random", n, {}};
  auto weight = [&] { return Rational(draw(rng, 1, spec.max_weight)); };
  if (spec.family == "line") {
    for (Vertex v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1, weight()});
  } else if (spec.family == "euclidean-grid") {
    const auto side = static_cast<std::int64_t>(n) * 2;
    std::set<std::pair<std::int64_t, std::int64_t>> used;
    std::vector<std::pair<std::int64_t, std::int64_t>> points;
    while (points.size() < n) {
      std::pair<std::int64_t, std::int64_t> p{draw(rng, 0, side), draw(rng, 0, side)};
      if (used.insert(p).second) points.push_back(p);
    }
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        std::int64_t dx = points[u].first - points[v].first;
        std::int64_t dy = points[u].second - points[v].second;
        g.edges.push_back({u, v, Rational(isqrt_ceil(dx * dx + dy * dy))});
      }
  } else if (spec.family == "random-metric") {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) g.edges.push_back({u, v, weight()});
  } else if (spec.family == "directed-random") {
    for (Vertex v = 0; v < n && n > 1; ++v) g.edges.push_back({v, (v + 1) % n, weight()});
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        if (u != v && draw(rng, 0, 9) < 3) g.edges.push_back({u, v, weight()});
  } else {
    throw Error(ErrorKind::argument, "unknown instance family '" + spec.family + "'");
  }
  return g;
}

}  // namespace detail

/// Seeded random instance. Window lengths are drawn from [len_lo, len_hi] and
/// releases so that every window ends by the horizon, all on the 1/grain grid.
inline TwInstance generate_instance(const GenSpec& spec) {
  if (spec.n == 0) throw Error(ErrorKind::argument, "need at least one vertex");
  if (spec.grain <= 0 || spec.max_weight <= 0 || spec.max_reward <= 0)
    throw Error(ErrorKind::argument, "grain, max_weight and max_reward must be positive");
  if (spec.len_lo < 0 || spec.len_lo > spec.len_hi)
    throw Error(ErrorKind::argument, "window length range is empty");
  if (spec.len_hi > spec.horizon)
    throw Error(ErrorKind::argument, "window length above the horizon");
  std::mt19937_64 rng(spec.seed);
  TwInstance x;
  x.metric = metric_closure(detail::generate_graph(spec, rng));
  x.budget = spec.horizon;
  const Rational grain(spec.grain);
  const std::int64_t lo = ceil(spec.len_lo * grain).numerator();
  const std::int64_t hi = floor(spec.len_hi * grain).numerator();
  if (lo > hi) throw Error(ErrorKind::argument, "no window length on the time grid");
  const std::int64_t h = floor(spec.horizon * grain).numerator();
  for (Vertex v = 0; v < spec.n; ++v) {
    std::int64_t len = detail::draw(rng, lo, hi);
    std::int64_t release = detail::draw(rng, 0, h - len);
    x.windows.push_back({Rational(release, spec.grain), Rational(release + len, spec.grain)});
    x.rewards.push_back(Rational(detail::draw(rng, 1, spec.max_reward)));
  }
  if (!spec.free_endpoints) {
    x.start = 0;
    x.end = spec.n - 1;
    for (Vertex v : {Vertex{0}, spec.n - 1}) {
      x.windows[v] = {Rational(0), spec.horizon};
      x.rewards[v] = Rational(0);
    }
  }
  x.validate();
  return x;
}

}  // namespace otw
