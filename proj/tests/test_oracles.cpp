#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace otw;
using otw::testing::R;

namespace {

const Metric& line_metric() {
  static const Metric m = metric_closure(otw::testing::path_graph(4));
  return m;
}

std::vector<Target> targets(std::initializer_list<Vertex> vs) {
  std::vector<Target> out;
  for (Vertex v : vs) out.push_back({v, R(1), std::nullopt});
  return out;
}

Metric random_metric(std::uint64_t seed, std::size_t n) {
  GenSpec g = otw::testing::base_spec(seed, n);
  g.family = seed % 2 ? "directed-random" : "random-metric";
  return generate_instance(g).metric;
}

std::vector<Target> random_targets(std::mt19937_64& rng, std::size_t n, bool deadlines) {
  std::vector<Target> out;
  for (Vertex v = 0; v < n; ++v)
    if (rng() % 3 != 0) {
      Target t{v, R(static_cast<std::int64_t>(1 + rng() % 3)), std::nullopt};
      if (deadlines) t.deadline = R(static_cast<std::int64_t>(rng() % 12));
      out.push_back(t);
    }
  return out;
}

}  // namespace

TEST(ExactOrienteering, Line4) {
  ExactOrienteering oracle;
  WalkResult r = oracle.solve({line_metric(), targets({1, 2}), 0, 3, R(5)});
  EXPECT_EQ(r.reward, R(2));
  EXPECT_EQ(r.order, (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(oracle.solve({line_metric(), targets({1, 2}), 0, 3, R(3)}).reward, R(2));
  EXPECT_FALSE(oracle.solve({line_metric(), targets({1, 2}), 0, 3, R(2)}).feasible());
  EXPECT_EQ(oracle.solve({line_metric(), targets({1}), 0, 3, R(3)}).reward, R(1));
}

TEST(ExactOrienteering, SameEndpointsZeroBudget) {
  WalkResult r = ExactOrienteering().solve({line_metric(), targets({1, 2}), 1, 1, R(0)});
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.reward, R(1));
  EXPECT_EQ(r.duration, R(0));
}

TEST(ExactOrienteering, MatchesReference) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Metric m = random_metric(seed, 8);
    std::vector<Target> eligible = random_targets(rng, 8, false);
    Vertex from = rng() % 8, to = rng() % 8;
    Rational budget = R(static_cast<std::int64_t>(rng() % 12));
    WalkResult r = ExactOrienteering().solve({m, eligible, from, to, budget});
    Rational ref = otw::testing::reference_orienteering(m, eligible, from, to, budget);
    if (ref < 0) {
      EXPECT_FALSE(r.feasible());
      continue;
    }
    ASSERT_TRUE(r.feasible()) << "seed " << seed;
    EXPECT_EQ(r.reward, ref) << "seed " << seed;
    EXPECT_LE(r.duration, budget);
    EXPECT_EQ(r.duration, walk_length(m, r.order));
    EXPECT_EQ(r.reward, credited_reward(m, eligible, r.order, R(0)));
  }
}

TEST(GreedyOrienteering, EmptyEligible) {
  WalkResult r = GreedyOrienteering().solve({line_metric(), {}, 0, 3, R(5)});
  EXPECT_EQ(r.order, (std::vector<Vertex>{0, 3}));
  EXPECT_EQ(r.reward, R(0));
}

TEST(GreedyOrienteering, Line4) {
  EXPECT_EQ(GreedyOrienteering().solve({line_metric(), targets({1, 2}), 0, 3, R(5)}).reward, R(2));
}

TEST(GreedyOrienteering, NeverExceedsBudget) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    Metric m = random_metric(static_cast<std::uint64_t>(i % 50), 7);
    std::vector<Target> eligible = random_targets(rng, 7, false);
    Vertex from = rng() % 7, to = rng() % 7;
    Rational budget = R(static_cast<std::int64_t>(rng() % 15));
    WalkResult r = GreedyOrienteering().solve({m, eligible, from, to, budget});
    if (!r.feasible()) {
      EXPECT_TRUE(!m.reachable(from, to) || m.d(from, to) > budget);
      continue;
    }
    EXPECT_LE(r.duration, budget);
    EXPECT_EQ(r.order.front(), from);
    EXPECT_EQ(r.order.back(), to);
    EXPECT_LE(r.reward, otw::testing::reference_orienteering(m, eligible, from, to, budget));
  }
}

TEST(ExactDeadline, Line4) {
  std::vector<Target> t{{1, R(1), R(2)}, {2, R(1), R(3)}};
  WalkResult r = ExactDeadline().solve({line_metric(), t, 0, R(0), Vertex{3}, R(5)});
  EXPECT_EQ(r.reward, R(2));
}

TEST(ExactDeadline, AllDeadlinesPassed) {
  std::vector<Target> t{{1, R(1), R(2)}, {2, R(1), R(3)}};
  WalkResult r = ExactDeadline().solve({line_metric(), t, 0, R(10), Vertex{3}, R(20)});
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.reward, R(0));
}

TEST(ExactDeadline, StartOffsetShiftsDeadlines) {
  std::vector<Target> t{{1, R(1), R(3)}, {2, R(1), R(3)}};
  // leaving at 1: vertex 1 at 2 and vertex 2 at 3, both in time
  EXPECT_EQ(ExactDeadline().solve({line_metric(), t, 0, R(1), std::nullopt, R(10)}).reward, R(2));
  EXPECT_EQ(ExactDeadline().solve({line_metric(), t, 0, R(2), std::nullopt, R(10)}).reward, R(1));
}

TEST(ExactDeadline, MatchesBruteForceOnDeadlineInstances) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    TwInstance x = otw::testing::deadline_instance(seed, 7);
    std::vector<Target> eligible;
    for (Vertex v = 0; v < x.size(); ++v)
      if (x.claimable(v)) eligible.push_back({v, x.rewards[v], x.windows[v].deadline});
    WalkResult r = ExactDeadline().solve({x.metric, eligible, *x.start, R(0), x.end, x.budget});
    ASSERT_TRUE(r.feasible());
    EXPECT_EQ(r.reward, brute_force_opt(x).reward) << "seed " << seed;
  }
}

TEST(LayeredDeadline, AlwaysFeasible) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    Metric m = random_metric(static_cast<std::uint64_t>(i % 40), 7);
    std::vector<Target> eligible = random_targets(rng, 7, true);
    Vertex from = rng() % 7;
    std::optional<Vertex> to;
    if (rng() % 2) to = rng() % 7;
    Rational start = R(static_cast<std::int64_t>(rng() % 3));
    Rational horizon = start + R(static_cast<std::int64_t>(rng() % 12));
    DeadlineQuery q{m, eligible, from, start, to, horizon};
    WalkResult r = LayeredDeadline().solve(q);
    WalkResult best = ExactDeadline().solve(q);
    EXPECT_EQ(r.feasible(), best.feasible());
    if (!r.feasible()) continue;
    EXPECT_EQ(r.order.front(), from);
    if (to) EXPECT_EQ(r.order.back(), *to);
    EXPECT_LE(start + r.duration, horizon);
    EXPECT_EQ(r.reward, credited_reward(m, eligible, r.order, start));
    EXPECT_LE(r.reward, best.reward);
  }
}

TEST(LayeredDeadline, SingleClassFindsBoth) {
  std::vector<Target> t{{1, R(1), R(4)}, {2, R(1), R(4)}};
  EXPECT_EQ(LayeredDeadline().solve({line_metric(), t, 0, R(0), std::nullopt, R(8)}).reward, R(2));
}

TEST(ParetoProfiles, Examples) {
  ParetoProfile empty = pareto_profiles(line_metric(), {}, 0, 3, R(5));
  ASSERT_EQ(empty.entries.size(), 1u);
  EXPECT_EQ(empty.entries[0].duration, R(3));
  EXPECT_EQ(empty.entries[0].reward, R(0));

  ParetoProfile both = pareto_profiles(line_metric(), targets({1, 2}), 0, 3, R(5));
  ASSERT_EQ(both.entries.size(), 1u);
  EXPECT_EQ(both.entries[0].duration, R(3));
  EXPECT_EQ(both.entries[0].reward, R(2));

  EXPECT_TRUE(pareto_profiles(line_metric(), targets({1}), 0, 3, R(2)).entries.empty());
}

TEST(ParetoProfiles, StrictlyIncreasingAndTight) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Metric m = random_metric(seed, 7);
    std::vector<Target> eligible = random_targets(rng, 7, false);
    Vertex from = rng() % 7, to = rng() % 7;
    ParetoProfile p = pareto_profiles(m, eligible, from, to, R(14));
    for (std::size_t i = 1; i < p.entries.size(); ++i) {
      EXPECT_LT(p.entries[i - 1].duration, p.entries[i].duration);
      EXPECT_LT(p.entries[i - 1].reward, p.entries[i].reward);
    }
    for (const ParetoEntry& e : p.entries) {
      EXPECT_EQ(walk_length(m, e.witness), e.duration);
      EXPECT_EQ(otw::testing::reference_orienteering(m, eligible, from, to, e.duration), e.reward);
    }
  }
}

TEST(LengthGrids, ContainDirectDistance) {
  const Metric& m = line_metric();
  auto subset = subset_length_grid(m, {1, 2}, 0, 3);
  EXPECT_EQ(subset, (std::vector<Rational>{R(3)}));
  auto orderings = ordering_length_grid(m, {1, 2}, 0, 3);
  // 0-1-2-3 = 3, 0-2-1-3 = 2+1+2 = 5
  EXPECT_EQ(orderings, (std::vector<Rational>{R(3), R(5)}));
}

TEST(MonotoneOrienteering, RewardNeverDropsWithBudget) {
  otw::testing::HalvingOracle halving;
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Metric m = random_metric(seed, 7);
    MonotoneOrienteering wrapped(halving, m, random_targets(rng, 7, false));
    Vertex from = rng() % 7, to = rng() % 7;
    std::vector<Rational> budgets;
    for (int i = 0; i < 10; ++i) budgets.push_back(R(static_cast<std::int64_t>(rng() % 14)));
    for (Rational b : budgets) wrapped.query(from, to, b);
    std::sort(budgets.begin(), budgets.end());
    std::optional<Rational> last;
    for (Rational b : budgets) {
      WalkResult r = wrapped.query(from, to, b);
      if (!r.feasible()) continue;
      EXPECT_LE(r.duration, b);
      if (last) EXPECT_GE(r.reward, *last);
      last = r.reward;
    }
  }
}

TEST(HalvingOracle, KeepsHalf) {
  otw::testing::HalvingOracle halving;
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Metric m = random_metric(seed, 7);
    std::vector<Target> eligible = random_targets(rng, 7, false);
    OrienteeringQuery q{m, eligible, 0, 6, R(10)};
    WalkResult exact = ExactOrienteering().solve(q), half = halving.solve(q);
    EXPECT_EQ(exact.feasible(), half.feasible());
    if (!exact.feasible()) continue;
    EXPECT_GE(half.reward * 2, exact.reward);
    EXPECT_LE(half.duration, R(10));
  }
}
