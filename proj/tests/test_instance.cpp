#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace otw;
using otw::testing::line4;
using otw::testing::R;

namespace {

TwInstance with_windows(std::vector<TimeWindow> windows) {
  std::size_t n = windows.size();
  return make_instance(otw::testing::path_graph(n), std::move(windows), std::nullopt,
                       std::nullopt, R(10));
}

std::vector<Step> random_walk(const TwInstance& x, std::mt19937_64& rng) {
  std::vector<Step> steps{{0, rng() % 2 == 0}};
  std::size_t len = rng() % 5;
  for (std::size_t i = 0; i < len; ++i) steps.push_back({rng() % x.size(), rng() % 2 == 0});
  steps.push_back({3, rng() % 2 == 0});
  return steps;
}

}  // namespace

TEST(WindowStats, MixedLengths) {
  WindowStats s = window_stats(line4());
  EXPECT_EQ(s.l_min, R(1));
  EXPECT_EQ(s.l_max, R(5));
  EXPECT_EQ(s.l_ratio, R(5));
  EXPECT_EQ(s.d_max, R(5));
}

TEST(WindowStats, EqualLengths) {
  WindowStats s = window_stats(with_windows({{R(0), R(1)}, {R(0), R(1)}}));
  EXPECT_EQ(s.l_ratio, R(1));
}

TEST(WindowStats, ZeroLengthExcludedFromLengths) {
  WindowStats s = window_stats(with_windows({{R(3), R(3)}, {R(0), R(4)}}));
  EXPECT_EQ(s.l_min, R(4));
  EXPECT_EQ(s.d_max, R(4));
  WindowStats z = window_stats(with_windows({{R(3), R(3)}}));
  EXPECT_FALSE(z.l_ratio.has_value());
}

TEST(ScaleTimes, IdentityAndUnitMinimum) {
  TwInstance x = line4();
  EXPECT_EQ(scale_times(x, R(1)), x);
  TwInstance half = with_windows({{R(0), R(1, 2)}, {R(0), R(1)}});
  EXPECT_EQ(window_stats(scale_times(half, R(2))).l_min, R(1));
  try {
    scale_times(x, R(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::argument);
  }
}

TEST(ScaleTimes, OptimumIsScaleInvariant) {
  TwInstance x = line4();
  for (Rational c : {R(1, 3), R(2), R(7, 2)})
    EXPECT_EQ(brute_force_opt(scale_times(x, c)).reward, brute_force_opt(x).reward);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TwInstance y = otw::testing::short_window_instance(seed, 6);
    EXPECT_EQ(brute_force_opt(scale_times(y, R(3, 2))).reward, brute_force_opt(y).reward);
  }
}

TEST(Restrict, ContainedWindowAccepted) {
  TwInstance x = with_windows({{R(1), R(6)}});
  TwInstance y = restrict(x, {TimeWindow{R(2), R(4)}});
  EXPECT_EQ(y.windows[0], (TimeWindow{R(2), R(4)}));
}

TEST(Restrict, EscapingWindowRejected) {
  TwInstance x = with_windows({{R(1), R(6)}});
  try {
    restrict(x, {TimeWindow{R(0), R(4)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::containment);
    EXPECT_NE(std::string(e.what()).find("vertex 0"), std::string::npos);
  }
}

TEST(Restrict, DroppedVertexLosesReward) {
  TwInstance y = restrict(line4(), {std::nullopt, TimeWindow{R(1), R(2)}, std::nullopt,
                                    std::nullopt});
  EXPECT_EQ(y.rewards[0], R(0));
  EXPECT_EQ(y.rewards[1], R(1));
}

TEST(Restrict, NeverIncreasesWalkReward) {
  TwInstance a = line4();
  TwInstance b = restrict(a, {TimeWindow{R(0), R(2)}, TimeWindow{R(1), R(3, 2)},
                              TimeWindow{R(5, 2), R(3)}, TimeWindow{R(4), R(5)}});
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<Step> walk = random_walk(a, rng);
    WalkEvaluation ea = evaluate_walk(a, walk), eb = evaluate_walk(b, walk);
    // a walk feasible on the restriction is feasible on the original
    if (eb.feasible) {
      ASSERT_TRUE(ea.feasible);
      EXPECT_LE(eb.walk.reward, ea.walk.reward);
    }
    WalkEvaluation ha = evaluate_walk(a, harvest(a, walk)), hb = evaluate_walk(b, harvest(b, walk));
    if (ha.feasible && hb.feasible) EXPECT_LE(hb.walk.reward, ha.walk.reward);
  }
}

TEST(EvaluateWalk, StraightLine) {
  TwInstance x = line4();
  WalkEvaluation e = evaluate_walk(x, {{0, true}, {1, true}, {2, true}, {3, true}});
  ASSERT_TRUE(e.feasible);
  std::vector<Rational> times;
  for (const Visit& v : e.walk.schedule) times.push_back(v.time);
  EXPECT_EQ(times, (std::vector<Rational>{R(0), R(1), R(2), R(3)}));
  EXPECT_EQ(e.walk.reward, R(4));
}

TEST(EvaluateWalk, RevisitCollectsLater) {
  TwInstance x = line4({R(3), R(4)});
  WalkEvaluation e =
    evaluate_walk(x, {{0, true}, {1, false}, {2, true}, {1, true}, {3, true}});
  ASSERT_TRUE(e.feasible);
  std::vector<Rational> times;
  for (const Visit& v : e.walk.schedule) times.push_back(v.time);
  EXPECT_EQ(times, (std::vector<Rational>{R(0), R(1), R(2), R(3), R(5)}));
  EXPECT_EQ(e.walk.collected, (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(e.walk.reward, R(4));
}

TEST(EvaluateWalk, NoWaitSkipsEarlyVisit) {
  TwInstance x = line4({R(2), R(3)});
  x.wait_policy = WaitPolicy::no_wait;
  WalkEvaluation e = evaluate_walk(x, {{0, true}, {1, true}, {2, true}, {3, true}});
  ASSERT_TRUE(e.feasible);
  EXPECT_EQ(e.walk.schedule[1].time, R(1));
  EXPECT_EQ(e.walk.collected, (std::vector<Vertex>{0, 2, 3}));
}

TEST(EvaluateWalk, InfeasibleReports) {
  TwInstance x = line4();
  EXPECT_FALSE(evaluate_walk(x, {{0, false}, {2, false}, {1, true}, {3, false}}).feasible);
  EXPECT_FALSE(evaluate_walk(x, {{0, false}, {3, false}, {0, false}, {3, false}}).feasible);
  EXPECT_FALSE(evaluate_walk(x, {{1, false}, {3, false}}).feasible);
  EXPECT_FALSE(evaluate_walk(x, {{0, false}, {2, false}}).feasible);
}

TEST(EvaluateWalk, ExplicitTimes) {
  TwInstance x = line4();
  std::vector<Step> order{{0, false}, {1, true}, {3, false}};
  std::vector<Rational> ok{R(0), R(3, 2), R(7, 2)}, early{R(0), R(1, 2), R(3)};
  auto e = evaluate_walk(x, order, std::span<const Rational>(ok));
  ASSERT_TRUE(e.feasible);
  EXPECT_EQ(e.walk.reward, R(1));
  EXPECT_FALSE(evaluate_walk(x, order, std::span<const Rational>(early)).feasible);
}

// Every feasible time assignment is matched by the earliest-feasible schedule
// with the same collect flags: integer data, up to 4 vertices, all orders of
// length <= 4 and every time vector up to the budget.
TEST(EvaluateWalk, EarliestScheduleDominatesExhaustiveTimes) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    otw::GenSpec g = otw::testing::base_spec(seed, 4);
    g.family = "random-metric";
    g.len_lo = R(0);
    g.len_hi = R(2);
    g.horizon = R(5);
    TwInstance x = generate_instance(g);
    x.start.reset();
    x.end.reset();
    x.budget = R(5);
    for (Vertex v = 0; v < 4; ++v) x.rewards[v] = R(1);
    std::vector<Vertex> order;
    std::function<void()> orders = [&] {
      if (!order.empty()) {
        std::vector<Rational> times(order.size());
        std::function<void(std::size_t)> assign = [&](std::size_t i) {
          if (i == order.size()) {
            std::vector<Step> steps;
            for (std::size_t k = 0; k < order.size(); ++k)
              steps.push_back({order[k], x.windows[order[k]].contains(times[k])});
            auto fixed = evaluate_walk(x, steps, std::span<const Rational>(times));
            if (!fixed.feasible) return;
            auto earliest = evaluate_walk(x, steps);
            ASSERT_TRUE(earliest.feasible);
            EXPECT_GE(earliest.walk.reward, fixed.walk.reward);
            return;
          }
          for (std::int64_t t = 0; t <= 5; ++t) {
            times[i] = R(t);
            if (i > 0 && times[i] < times[i - 1] + x.metric.d(order[i - 1], order[i])) continue;
            assign(i + 1);
          }
        };
        assign(0);
      }
      if (order.size() == 4) return;
      for (Vertex v = 0; v < 4; ++v) {
        order.push_back(v);
        orders();
        order.pop_back();
      }
    };
    orders();
  }
}

TEST(Harvest, FlagsPassesInsideWindows) {
  TwInstance x = line4();
  std::vector<Step> walk = harvest(x, {{0, false}, {1, false}, {2, false}, {3, false}});
  EXPECT_EQ(evaluate_walk(x, walk).walk.reward, R(4));
  std::vector<Step> repeat = harvest(x, {{0, true}, {0, true}, {1, false}, {2, false}, {3, false}});
  EXPECT_FALSE(repeat[1].collect);
}

TEST(TimeReverse, MirrorsWindowsAndAnchors) {
  TwInstance x = line4();
  TwInstance y = time_reverse(x, R(5));
  EXPECT_EQ(y.windows[1], (TimeWindow{R(3), R(4)}));
  EXPECT_EQ(y.start, std::optional<Vertex>(3));
  EXPECT_EQ(y.end, std::optional<Vertex>(0));
  EXPECT_EQ(time_reverse(y, R(5)), x);
}

TEST(TimeReverse, PreservesOptimum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TwInstance x = otw::testing::short_window_instance(seed, 6);
    EXPECT_EQ(brute_force_opt(time_reverse(x, x.budget)).reward, brute_force_opt(x).reward)
      << "seed " << seed;
  }
}

TEST(TwInstance, ValidateRejectsBadData) {
  TwInstance x = line4();
  x.windows[1] = {R(3), R(2)};
  EXPECT_THROW(x.validate(), Error);
  x = line4();
  x.rewards[2] = R(-1);
  EXPECT_THROW(x.validate(), Error);
  x = line4();
  x.start = 9;
  EXPECT_THROW(x.validate(), Error);
}
