#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ergodic/tsp.hpp"

using namespace ergodic;
using namespace ergodic::tsp;

namespace {

TspInstance corners() { return TspInstance({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// Leg length computed directly from coordinates.
double direct_cost(const TspInstance& inst, const Tour& t) {
  double total = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& a = inst.cities()[static_cast<std::size_t>(t[k])];
    const auto& b = inst.cities()[static_cast<std::size_t>(t[(k + 1) % t.size()])];
    total += std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]));
  }
  return total;
}

Tour identity(int n) {
  Tour t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), 0);
  return t;
}

}  // namespace

TEST(PairIndex, DenseAndSymmetric) {
  for (int n : {3, 4, 7, 12}) {
    std::vector<int> hits(static_cast<std::size_t>(n * (n - 1) / 2), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) {
          EXPECT_EQ(pair_index(n, i, j), pair_index(n, j, i));
          if (i < j) ++hits.at(pair_index(n, i, j));
        }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(TspInstance, Validation) {
  EXPECT_THROW(TspInstance({{0, 0}, {1, 1}}), std::domain_error);
  EXPECT_THROW(TspInstance({{0, 0}, {1, 1}, {1.5, 0}}), std::invalid_argument);
}

TEST(TourCost, UnitSquare) {
  const auto inst = corners();
  EXPECT_DOUBLE_EQ(tour_cost(inst, {0, 1, 2, 3}, inst.mean_times()), 4.0);
  EXPECT_DOUBLE_EQ(tour_cost(inst, {0, 2, 1, 3}, inst.mean_times()), 2.0 + 2.0 * std::sqrt(2.0));
}

TEST(TourCost, ThreeCitiesIsPerimeter) {
  const TspInstance inst({{0, 0}, {0.3, 0}, {0, 0.4}});
  EXPECT_NEAR(tour_cost(inst, {0, 1, 2}, inst.mean_times()), 0.3 + 0.4 + 0.5, 1e-15);
  EXPECT_NEAR(tour_cost(inst, {2, 1, 0}, inst.mean_times()), 1.2, 1e-15);
}

TEST(TourCost, InvariantUnderRotationAndReversal) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = generate_tsp(12, 100 + static_cast<std::uint64_t>(trial));
    Tour t = identity(12);
    for (int k = 0; k < 20; ++k) t = two_opt_move(t, rng);
    const double c = tour_cost(inst, t, inst.mean_times());
    EXPECT_NEAR(c, direct_cost(inst, t), 1e-12);
    Tour rot = t;
    std::rotate(rot.begin(), rot.begin() + 5, rot.end());
    Tour rev(t.rbegin(), t.rend());
    EXPECT_NEAR(tour_cost(inst, rot, inst.mean_times()), c, 1e-12);
    EXPECT_NEAR(tour_cost(inst, rev, inst.mean_times()), c, 1e-12);
    EXPECT_EQ(canonical_tour(rot), canonical_tour(t));
    EXPECT_EQ(canonical_tour(rev), canonical_tour(t));
  }
}

TEST(CanonicalTour, Shape) {
  EXPECT_EQ(canonical_tour({2, 3, 0, 1}), (Tour{0, 1, 2, 3}));
  EXPECT_EQ(canonical_tour({3, 2, 1, 0}), (Tour{0, 1, 2, 3}));
  EXPECT_THROW(canonical_tour({0, 0, 1}), std::invalid_argument);
}

TEST(TwoOpt, ReverseIsAnInvolution) {
  const Tour t{0, 1, 2, 3, 4, 5, 6};
  EXPECT_EQ(two_opt_reverse(t, 1, 4), (Tour{0, 1, 4, 3, 2, 5, 6}));
  for (int i = 0; i < 7; ++i)
    for (int j = i + 2; j < 7; ++j) {
      if (i == 0 && j == 6) continue;
      EXPECT_EQ(two_opt_reverse(two_opt_reverse(t, i, j), i, j), t);
    }
}

TEST(TwoOpt, UncrossesTheBowTie) {
  const auto inst = corners();
  const Tour crossed{0, 2, 1, 3};
  // Legs 0 (0-2) and 2 (1-3) cross; reversing between them yields the square.
  const Tour fixed = two_opt_reverse(crossed, 0, 2);
  EXPECT_DOUBLE_EQ(tour_cost(inst, fixed, inst.mean_times()), 4.0);
}

TEST(TwoOpt, MoveKeepsPermutationAndChangesTwoLegs) {
  Rng rng(8);
  const auto inst = generate_tsp(15, 1);
  Tour t = identity(15);
  for (int i = 0; i < 500; ++i) {
    const Tour next = two_opt_move(t, rng);
    ASSERT_TRUE(is_permutation_tour(next, 15));
    auto a = tour_legs(inst, t), b = tour_legs(inst, next);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<Index> gone;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(gone));
    EXPECT_EQ(gone.size(), 2u);
    t = next;
  }
}

TEST(TwoOpt, ProposalIsSymmetric) {
  // P(x -> y) = P(y -> x) for a 2-opt neighbour y of x, checked empirically.
  Rng rng(21);
  const Tour x = identity(6);
  const Tour y = two_opt_reverse(x, 0, 3);
  constexpr int draws = 200'000;
  int xy = 0, yx = 0;
  for (int i = 0; i < draws; ++i) {
    xy += canonical_tour(two_opt_move(x, rng)) == canonical_tour(y);
    yx += canonical_tour(two_opt_move(y, rng)) == canonical_tour(x);
  }
  const double p = 1.0 / 9.0;  // n(n-3)/2 = 9 leg pairs, each a distinct tour
  const double sigma = std::sqrt(draws * p * (1 - p));
  EXPECT_NEAR(xy, draws * p, 4 * sigma);
  EXPECT_LE(std::abs(xy - yx), 3 * std::sqrt(2.0) * sigma);
}

TEST(TwoOpt, IdentityBelowFourCities) {
  Rng rng(1);
  EXPECT_EQ(two_opt_move({0, 1, 2}, rng), (Tour{0, 1, 2}));
}

TEST(SampleLeg, NoiseFreeAndBounds) {
  const auto inst = generate_tsp(5, 3);
  Rng rng(2);
  EXPECT_EQ(sample_leg(inst, TravelNoise{0.0}, 1, 3, rng), inst.mean_time(1, 3));
  const double m = inst.mean_time(0, 4);
  double sum = 0;
  constexpr int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_leg(inst, TravelNoise{0.5}, 0, 4, rng);
    ASSERT_GE(x, 0.5 * m);
    ASSERT_LE(x, 1.5 * m);
    sum += x;
  }
  const double sd_mean = m * 1.0 / std::sqrt(12.0) / std::sqrt(double(draws));  // width 1 => sd 1/sqrt(12)
  EXPECT_NEAR(sum / draws, m, 3 * sd_mean);
  EXPECT_THROW(TravelNoise{1.0}.validate(), std::domain_error);
}

TEST(BruteForceTsp, SquareAndRandomInstances) {
  const auto sq = brute_force_tsp(corners());
  EXPECT_DOUBLE_EQ(sq.cost, 4.0);
  EXPECT_EQ(canonical_tour(sq.tour), (Tour{0, 1, 2, 3}));
  EXPECT_THROW(brute_force_tsp(generate_tsp(11, 1)), std::invalid_argument);

  // Against an independent full permutation enumeration.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate_tsp(7, seed);
    Tour t = identity(7);
    double best = 1e300;
    do best = std::min(best, direct_cost(inst, t));
    while (std::next_permutation(t.begin() + 1, t.end()));
    EXPECT_NEAR(brute_force_tsp(inst).cost, best, 1e-12);
  }
}

TEST(TspAnnealing, FindsOptimumOnSmallInstances) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_tsp(8, 7000 + seed);
    const auto best = brute_force_tsp(inst);
    TspModel model(inst);
    const auto r = simulated_annealing(model, identity(8), AnnealingSchedule::geometric(1.0, 0.05, 400),
                                       {1'000'000, 2000}, seed);
    EXPECT_GE(-r.final_value, best.cost - 1e-12);
    hits += -r.final_value <= best.cost + 1e-9;
  }
  EXPECT_GE(hits, 95);
}

TEST(TspLearning, EstimatedCostIsSumOfLegEstimates) {
  const auto inst = generate_tsp(10, 5);
  DecomposedEstimator est(static_cast<Index>(inst.num_legs()), 0.5);
  TspLearningModel model(inst, est, TravelNoise{0.5}, Rng(3));
  Tour t = identity(10);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    model.observe(t);
    double sum = 0;
    for (Index leg : tour_legs(inst, t)) sum += est.estimate(leg);
    EXPECT_NEAR(-*model.utility(t), sum, 1e-12);
    EXPECT_NEAR(-*model.true_utility(t), tour_cost(inst, t, inst.mean_times()), 1e-12);
    t = two_opt_move(t, rng);
  }
  std::int64_t observations = 0;
  for (Index c = 0; c < est.size(); ++c) observations += est.count(c);
  EXPECT_EQ(observations, 200 * 10);
}

TEST(TspLearning, HiddenTruth) {
  const auto inst = generate_tsp(5, 5);
  DecomposedEstimator est(static_cast<Index>(inst.num_legs()), 0.5);
  TspLearningModel model(inst, est, TravelNoise{0.5}, Rng(3), false);
  EXPECT_FALSE(model.true_utility(identity(5)).has_value());
}

TEST(GenerateTsp, DeterministicAndInsideSquare) {
  const auto a = generate_tsp(40, 9), b = generate_tsp(40, 9);
  EXPECT_EQ(a.cities(), b.cities());
  EXPECT_NE(a.cities(), generate_tsp(40, 10).cities());
  for (const auto& p : a.cities()) {
    EXPECT_GE(p[0], 0.0);
    EXPECT_LT(p[0], 1.0);
    EXPECT_GE(p[1], 0.0);
    EXPECT_LT(p[1], 1.0);
  }
}

TEST(TspJson, RoundTripIsBitExact) {
  const auto inst = generate_tsp(33, 77);
  const auto text = to_json(inst).dump();
  const auto back = tsp_instance_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.cities(), inst.cities());
  EXPECT_EQ(back.seed(), inst.seed());
  EXPECT_EQ(to_json(back).dump(), text);
}
