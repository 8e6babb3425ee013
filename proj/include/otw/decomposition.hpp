#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otw/error.hpp"
#include "otw/instance.hpp"

namespace otw {

/// A dyadic sub-interval [lo, hi] with hi - lo = 2^level and lo a multiple of
/// 2^level. `slot` is 1 for the first piece of its length inside the source
/// interval and 2 for the second.
struct DyadicPiece {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  int level = 0;
  int slot = 1;

  bool operator==(const DyadicPiece&) const = default;
};

/// Splits the integer interval [lo, hi] into aligned power-of-two pieces.
///
/// Peel a unit piece off each odd endpoint, halve the (even) residual, and
/// repeat one level up. Each level contributes at most two pieces, so an
/// interval of length M > 1 needs at most 2 log2 M of them.
inline std::vector<DyadicPiece> dyadic_partition(std::int64_t lo, std::int64_t hi) {
  if (lo >= hi) throw Error(ErrorKind::argument, "dyadic_partition needs lo < hi");
  auto odd = [](std::int64_t a) { return (a % 2 + 2) % 2 == 1; };
  std::vector<DyadicPiece> head, tail;
  std::int64_t a = lo, b = hi;
  int level = 0;
  while (a < b) {
    const std::int64_t unit = std::int64_t{1} << level;
    if (odd(a)) {
      head.push_back({a * unit, (a + 1) * unit, level, 1});
      ++a;
    }
    if (a < b && odd(b)) {
      tail.push_back({(b - 1) * unit, b * unit, level, 1});
      --b;
    }
    a /= 2;
    b /= 2;
    ++level;
  }
  std::vector<DyadicPiece> pieces = std::move(head);
  pieces.insert(pieces.end(), tail.rbegin(), tail.rend());
  for (std::size_t i = 1; i < pieces.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (pieces[j].level == pieces[i].level) pieces[i].slot = 2;
  return pieces;
}

struct RestrictedVersion {
  std::string label;
  TwInstance instance;
};

/// Restricted versions of `base` whose windows jointly cover every original
/// window. `scale` is the factor that maps the caller's instance to `base`.
struct RestrictedFamily {
  TwInstance base;
  Rational scale{1};
  std::vector<RestrictedVersion> versions;

  std::size_t beta() const { return versions.size(); }
};

namespace detail {

inline void require_ratio_at_most_two(const TwInstance& x, const char* op) {
  WindowStats s = window_stats(x);
  if (s.l_ratio && *s.l_ratio > 2)
    throw Error(ErrorKind::precondition,
                std::string(op) + " needs L <= 2, got L = " + to_string(*s.l_ratio));
}

/// Scales so the shortest positive window has length 1.
inline std::pair<TwInstance, Rational> scale_to_unit_min(const TwInstance& x) {
  WindowStats s = window_stats(x);
  if (!s.l_min) return {x, Rational(1)};
  Rational c = Rational(1) / *s.l_min;
  return {scale_times(x, c), c};
}

/// Collects per-version windows keyed by an ordered label and emits the
/// nonempty versions in key order.
template <typename Key>
class VersionBuilder {
 public:
  explicit VersionBuilder(const TwInstance& base) : base_(base) {}

  void assign(const Key& key, const std::string& label, Vertex v, TimeWindow w) {
    auto [it, inserted] = windows_.try_emplace(key);
    if (inserted) {
      it->second.first = label;
      it->second.second.assign(base_.size(), std::nullopt);
    }
    it->second.second[v] = w;
  }

  std::vector<RestrictedVersion> build() const {
    std::vector<RestrictedVersion> out;
    for (const auto& [key, entry] : windows_)
      out.push_back({entry.first, restrict(base_, entry.second)});
    return out;
  }

 private:
  const TwInstance& base_;
  std::map<Key, std::pair<std::string, std::vector<std::optional<TimeWindow>>>> windows_;
};

}  // namespace detail

/// One version per (slot, level) of the dyadic pieces; inside a version any
/// two windows are identical or disjoint. Zero-length windows are left out.
inline RestrictedFamily dyadic_family(const TwInstance& x) {
  RestrictedFamily family{x, Rational(1), {}};
  detail::VersionBuilder<std::pair<int, int>> builder(x);
  for (Vertex v = 0; v < x.size(); ++v) {
    if (!x.claimable(v)) continue;
    const TimeWindow& w = x.windows[v];
    if (!is_integer(w.release) || !is_integer(w.deadline))
      throw Error(ErrorKind::precondition,
                  "vertex " + std::to_string(v) + " has a non-integer window endpoint");
    if (w.length() == 0) continue;
    for (const DyadicPiece& p : dyadic_partition(w.release.numerator(), w.deadline.numerator()))
      builder.assign({p.slot, p.level},
                     "B" + std::to_string(p.slot) + "_" + std::to_string(p.level), v,
                     {Rational(p.lo), Rational(p.hi)});
  }
  family.versions = builder.build();
  return family;
}

/// Three-way split for L <= 2 after scaling to L_min = 1: [R, a], [a, b],
/// [b, D] with a the next integer strictly above R and b the last integer
/// strictly below D. Point middles are dropped; when a = b + 1 the window is
/// a unit integer interval and goes to B1 whole.
inline RestrictedFamily three_split_floor(const TwInstance& x) {
  detail::require_ratio_at_most_two(x, "three_split_floor");
  auto [base, c] = detail::scale_to_unit_min(x);
  RestrictedFamily family{base, c, {}};
  detail::VersionBuilder<int> builder(family.base);
  for (Vertex v = 0; v < base.size(); ++v) {
    if (!base.claimable(v)) continue;
    const TimeWindow& w = base.windows[v];
    if (w.length() == 0) continue;
    Rational a = floor(w.release) + 1;
    Rational b = ceil(w.deadline) - 1;
    if (a > b) {
      builder.assign(1, "B1", v, w);
      continue;
    }
    builder.assign(1, "B1", v, {w.release, a});
    if (a < b) builder.assign(2, "B2", v, {a, b});
    builder.assign(3, "B3", v, {b, w.deadline});
  }
  family.versions = builder.build();
  return family;
}

/// Three-way split for arbitrary L after scaling to L_min = 1, with
/// a = ceil(R + 1) and b = floor(D - 1). B1 and B3 windows have length in
/// [1, 2] and may overlap; B2 windows have integer endpoints.
inline RestrictedFamily three_split_ceil(const TwInstance& x) {
  auto [base, c] = detail::scale_to_unit_min(x);
  RestrictedFamily family{base, c, {}};
  detail::VersionBuilder<int> builder(family.base);
  for (Vertex v = 0; v < base.size(); ++v) {
    if (!base.claimable(v)) continue;
    const TimeWindow& w = base.windows[v];
    if (w.length() == 0) continue;
    Rational a = ceil(w.release + 1);
    Rational b = floor(w.deadline - 1);
    builder.assign(1, "B1", v, {w.release, std::min(a, w.deadline)});
    if (a < b) builder.assign(2, "B2", v, {a, b});
    builder.assign(3, "B3", v, {std::max(b, w.release), w.deadline});
  }
  family.versions = builder.build();
  return family;
}

/// Cuts a window at every interior multiple of 1/2.
inline std::vector<TimeWindow> half_grid_pieces(const TimeWindow& w) {
  std::vector<TimeWindow> pieces;
  const Rational half(1, 2);
  Rational cut = floor(w.release * 2) / 2 + half;
  Rational lo = w.release;
  while (cut < w.deadline) {
    pieces.push_back({lo, cut});
    lo = cut;
    cut += half;
  }
  pieces.push_back({lo, w.deadline});
  return pieces;
}

/// Five-way split for L <= 2 after scaling to L_min = 1: B1 takes the first
/// half-grid piece, B5 the last, and B2..B4 the middle pieces in order.
inline RestrictedFamily five_split(const TwInstance& x) {
  detail::require_ratio_at_most_two(x, "five_split");
  auto [base, c] = detail::scale_to_unit_min(x);
  RestrictedFamily family{base, c, {}};
  detail::VersionBuilder<int> builder(family.base);
  for (Vertex v = 0; v < base.size(); ++v) {
    if (!base.claimable(v)) continue;
    const TimeWindow& w = base.windows[v];
    if (w.length() == 0) continue;
    std::vector<TimeWindow> pieces = half_grid_pieces(w);
    builder.assign(1, "B1", v, pieces.front());
    if (pieces.size() > 1) builder.assign(5, "B5", v, pieces.back());
    for (std::size_t i = 1; i + 1 < pieces.size(); ++i) {
      int index = static_cast<int>(i) + 1;
      builder.assign(index, "B" + std::to_string(index), v, pieces[i]);
    }
  }
  family.versions = builder.build();
  return family;
}

/// Containment and exact-coverage problems of a family; empty when valid.
inline std::vector<std::string> check_family(const RestrictedFamily& family) {
  std::vector<std::string> problems;
  const TwInstance& base = family.base;
  std::vector<std::vector<TimeWindow>> parts(base.size());
  for (const auto& version : family.versions) {
    for (Vertex v = 0; v < base.size(); ++v) {
      if (!version.instance.claimable(v)) continue;
      const TimeWindow& w = version.instance.windows[v];
      if (!base.windows[v].contains(w))
        problems.push_back(version.label + ": vertex " + std::to_string(v) + " escapes its window");
      parts[v].push_back(w);
    }
  }
  for (Vertex v = 0; v < base.size(); ++v) {
    if (!base.claimable(v) || base.windows[v].length() == 0) continue;
    auto& p = parts[v];
    std::sort(p.begin(), p.end(),
              [](const TimeWindow& a, const TimeWindow& b) { return a.release < b.release; });
    bool covered = !p.empty() && p.front().release == base.windows[v].release;
    Rational reach = covered ? p.front().deadline : Rational(0);
    for (std::size_t i = 1; covered && i < p.size(); ++i) {
      if (p[i].release > reach) covered = false;
      reach = std::max(reach, p[i].deadline);
    }
    if (!covered || reach != base.windows[v].deadline)
      problems.push_back("vertex " + std::to_string(v) + " window not covered exactly");
  }
  return problems;
}

}  // namespace otw
