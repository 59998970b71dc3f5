#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ergodic/chain.hpp"
#include "test_support.hpp"

using namespace ergodic;

namespace {

const FiniteActionSpace kTwo = FiniteActionSpace::indexed(2);

Vector<double> vec(std::initializer_list<double> xs) {
  Vector<double> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

// =============================================================================
// Domain types
// =============================================================================

TEST(ActionSpace, RejectsDegenerateAndDuplicateSpaces) {
  EXPECT_THROW(FiniteActionSpace({"only"}), std::invalid_argument);
  EXPECT_THROW(FiniteActionSpace({"a", "b", "a"}), std::invalid_argument);
  FiniteActionSpace s({"left", "right"});
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.name(1), "right");
}

TEST(ProposalKernel, ValidatesExplicitMatrices) {
  Matrix<double> not_stochastic(2, 2);
  not_stochastic << 0.5, 0.4, 0.4, 0.5;
  EXPECT_THROW(ProposalKernel<double>::from_matrix(not_stochastic), std::invalid_argument);

  Matrix<double> asymmetric(3, 3);
  asymmetric << 0, 0.5, 0.5, 0.2, 0.3, 0.5, 0.5, 0.5, 0;
  EXPECT_THROW(ProposalKernel<double>::from_matrix(asymmetric), std::invalid_argument);

  Matrix<double> reducible = Matrix<double>::Identity(3, 3);
  EXPECT_THROW(ProposalKernel<double>::from_matrix(reducible), std::invalid_argument);

  const auto uniform = ProposalKernel<double>::uniform(4);
  EXPECT_TRUE(uniform.is_explicit());
  EXPECT_NEAR(uniform.matrix()(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(uniform.matrix()(2, 2), 0.0);
}

TEST(ProposalKernel, UniformKernelNeverProposesIncumbent) {
  const auto q = ProposalKernel<double>::uniform(5);
  Rng rng(3);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 50'000; ++i) {
    const Index b = q.sample(2, rng);
    ASSERT_NE(b, 2);
    ++hits[static_cast<std::size_t>(b)];
  }
  for (int b : {0, 1, 3, 4}) EXPECT_NEAR(hits[static_cast<std::size_t>(b)] / 50'000.0, 0.25, 0.01);
}

TEST(ProposalKernel, GeneratorKernelHasNoMatrix) {
  auto k = ProposalKernel<double>::from_generator(3, [](Index a, Rng&) { return (a + 1) % 3; });
  EXPECT_FALSE(k.is_explicit());
  EXPECT_THROW((void)k.matrix(), UnsupportedOperation);
  EXPECT_THROW(transition_matrix(FiniteActionSpace::indexed(3), Vector<double>::Zero(3).eval(), 1.0, k),
               UnsupportedOperation);
}

// =============================================================================
// acceptance_probability
// =============================================================================

TEST(Acceptance, UphillAndLevelMovesAlwaysAccepted) {
  EXPECT_EQ(acceptance_probability(0.3, 0.7, 5.0), 1.0);
  EXPECT_EQ(acceptance_probability(0.42, 0.42, 123.0), 1.0);
}

TEST(Acceptance, DownhillIsExponentialInGap) {
  EXPECT_NEAR(acceptance_probability(std::log(2.0), 0.0, 1.0), 0.5, 1e-15);
  EXPECT_LT(acceptance_probability(0.0, -1.0, 1e6), 1e-300);
}

TEST(Acceptance, RejectsNonFiniteInputs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(acceptance_probability(nan, 0.0, 1.0), std::domain_error);
  EXPECT_THROW(acceptance_probability(0.0, inf, 1.0), std::domain_error);
  EXPECT_THROW(acceptance_probability(0.0, 1.0, 0.0), std::domain_error);
}

// =============================================================================
// Gibbs and limit distributions
// =============================================================================

TEST(Gibbs, SymmetricUtilitiesGiveUniform) {
  const auto p = gibbs_distribution(FiniteActionSpace::indexed(3), vec({0.7, 0.7, 0.7}), 4.2);
  for (Index a = 0; a < 3; ++a) EXPECT_NEAR(p(a), 1.0 / 3.0, 1e-15);
}

TEST(Gibbs, WeightsOneAndTwo) {
  const auto p = gibbs_distribution(kTwo, vec({0.0, std::log(2.0)}), 1.0);
  EXPECT_NEAR(p(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p(1), 2.0 / 3.0, 1e-15);
}

TEST(Gibbs, LargeUtilitiesDoNotOverflow) {
  const auto p = gibbs_distribution(kTwo, vec({1000.0, 0.0}), 1.0);
  ASSERT_TRUE(p.allFinite());
  EXPECT_NEAR(p(0), 1.0, 1e-15);
  EXPECT_LT(p(1), 1e-300);
}

TEST(Gibbs, SmallBetaApproachesUniformWithinBound) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(9));
    const auto space = FiniteActionSpace::indexed(n);
    const auto u = test_support::random_utilities(n, rng, -3, 3);
    const Distribution<double> uniform = Distribution<double>::Constant(n, 1.0 / double(n));
    for (double beta : {1e-1, 1e-3, 1e-6}) {
      const double bound = beta * (u.maxCoeff() - u.minCoeff());
      EXPECT_LE(total_variation(gibbs_distribution(space, u, beta), uniform), bound + 1e-15);
    }
  }
}

TEST(Limit, UniformOverTies) {
  const auto space = FiniteActionSpace::indexed(3);
  const auto tie = limit_distribution(space, vec({0, 5, 5}));
  EXPECT_EQ(tie(0), 0.0);
  EXPECT_EQ(tie(1), 0.5);
  EXPECT_EQ(tie(2), 0.5);

  const auto unique = limit_distribution(space, vec({1, 2, 3}));
  EXPECT_EQ(unique(2), 1.0);
  EXPECT_EQ(unique(0) + unique(1), 0.0);

  const auto flat = limit_distribution(space, vec({2, 2, 2}));
  for (Index a = 0; a < 3; ++a) EXPECT_NEAR(flat(a), 1.0 / 3.0, 1e-15);

  const auto near = limit_distribution(kTwo, vec({1.0, 1.0 - 5e-13}));
  EXPECT_EQ(near(0), 0.5);
}

TEST(Limit, GibbsConcentratesOnLimitForLargeBeta) {
  const auto space = FiniteActionSpace::indexed(4);
  const auto u = vec({0.1, 0.9, 0.4, 0.9});
  EXPECT_LT(total_variation(gibbs_distribution(space, u, 200.0), limit_distribution(space, u)), 1e-30);
}

// =============================================================================
// Transition matrix
// =============================================================================

TEST(TransitionMatrix, ConstantUtilityReproducesKernel) {
  Rng rng(5);
  const Matrix<double> q = test_support::random_symmetric_kernel(5, rng);
  const auto k = ProposalKernel<double>::from_matrix(q);
  const auto p = transition_matrix(FiniteActionSpace::indexed(5), Vector<double>::Constant(5, 0.3).eval(), 2.0, k);
  EXPECT_LT((p - q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransitionMatrix, TwoStateClosedForm) {
  Matrix<double> q(2, 2);
  q << 0, 1, 1, 0;
  const auto p = transition_matrix(kTwo, vec({0.0, std::log(2.0)}), 1.0, ProposalKernel<double>::from_matrix(q));
  EXPECT_NEAR(p(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(p(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(p(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.5, 1e-15);
}

TEST(TransitionMatrix, DetailedBalanceStationarityAndRowSums) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.index(9));
    const auto space = FiniteActionSpace::indexed(n);
    const auto u = test_support::random_utilities(n, rng);
    const auto k = ProposalKernel<double>::from_matrix(test_support::random_symmetric_kernel(n, rng));
    for (double beta : {0.1, 1.0, 10.0}) {
      const auto p = transition_matrix(space, u, beta, k);
      const auto pi = gibbs_distribution(space, u, beta);
      EXPECT_GE(p.minCoeff(), 0.0);
      EXPECT_LT((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) EXPECT_NEAR(pi(a) * p(a, b), pi(b) * p(b, a), 1e-12);
      EXPECT_LT((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(TransitionMatrix, SixStateStationarity) {
  Rng rng(6);
  const auto space = FiniteActionSpace::indexed(6);
  const auto u = test_support::random_utilities(6, rng, -2, 2);
  const auto k = ProposalKernel<double>::from_matrix(test_support::random_symmetric_kernel(6, rng));
  const auto p = transition_matrix(space, u, 1.7, k);
  const auto pi = gibbs_distribution(space, u, 1.7);
  EXPECT_LT((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TransitionMatrix, ShiftInvariance) {
  Rng rng(8);
  const auto space = FiniteActionSpace::indexed(7);
  const auto u = test_support::random_utilities(7, rng);
  const Vector<double> shifted = (u.array() + 12.5).matrix();
  const auto k = ProposalKernel<double>::from_matrix(test_support::random_symmetric_kernel(7, rng));
  EXPECT_LT((transition_matrix(space, u, 3.0, k) - transition_matrix(space, shifted, 3.0, k)).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LT((gibbs_distribution(space, u, 3.0) - gibbs_distribution(space, shifted, 3.0)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((limit_distribution(space, u) - limit_distribution(space, shifted)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TransitionMatrix, WorksInLongDouble) {
  const FiniteActionSpace space = FiniteActionSpace::indexed(3);
  Vector<long double> u(3);
  u << 0.0L, 0.5L, 1.0L;
  const auto k = ProposalKernel<long double>::uniform(3);
  const auto p = transition_matrix(space, u, 2.0L, k);
  const auto pi = gibbs_distribution(space, u, 2.0L);
  EXPECT_LT(static_cast<double>((pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff()), 1e-15);
}

// =============================================================================
// metropolis_step / run_chain
// =============================================================================

TEST(MetropolisStep, HugeBetaRejectsDownhill) {
  const auto k = ProposalKernel<double>::uniform(2);
  Rng rng(1);
  const auto u = vec({0.0, -1.0});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(metropolis_step<double>(0, u, 1e6, k, rng), 0);
}

TEST(MetropolisStep, ConstantUtilityIsKernelWalk) {
  const auto k = ProposalKernel<double>::uniform(5);
  const Vector<double> u = Vector<double>::Constant(5, 1.0);
  Rng a(77), b(77);
  Index s = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index proposed = k.sample(s, b);
    s = metropolis_step(s, u, 1.0, k, a);
    ASSERT_EQ(s, proposed);
  }
}

TEST(MetropolisStep, TwoStateDownhillAcceptanceRate) {
  // From action 1 (u = ln 2) the only proposal is 0; closed form acceptance is 1/2.
  const auto k = ProposalKernel<double>::uniform(2);
  const auto u = vec({0.0, std::log(2.0)});
  Rng rng(99);
  int accepted = 0;
  constexpr int trials = 100'000;
  for (int i = 0; i < trials; ++i) accepted += metropolis_step<double>(1, u, 1.0, k, rng) == 0;
  EXPECT_NEAR(accepted / double(trials), 0.5, 0.01);
}

TEST(RunChain, LengthAndDeterminism) {
  const auto k = ProposalKernel<double>::uniform(4);
  const auto u = vec({0.1, 0.2, 0.3, 0.4});
  const auto cfg = ChainConfig<double>::uniform(4, 1.0, 1234);
  EXPECT_EQ(run_chain(cfg, u, k, 1).size(), 2u);
  EXPECT_EQ(run_chain(cfg, u, k, 5000), run_chain(cfg, u, k, 5000));
  auto other = cfg;
  other.seed = 1235;
  EXPECT_NE(run_chain(cfg, u, k, 5000), run_chain(other, u, k, 5000));
}

TEST(RunChain, PointMassInitialDistribution) {
  const auto k = ProposalKernel<double>::uniform(3);
  ChainConfig<double> cfg{vec({0, 0, 1}), 1.0, 5};
  EXPECT_EQ(run_chain(cfg, vec({0, 0, 0}), k, 3).front(), 2);
  cfg.initial_distribution = vec({0.5, 0.2, 0.2});
  EXPECT_THROW(run_chain(cfg, vec({0, 0, 0}), k, 3), std::invalid_argument);
}

TEST(RunChain, EmpiricalFrequencyConvergesToGibbs) {
  Rng rng(31);
  const auto space = FiniteActionSpace::indexed(8);
  const auto u = test_support::random_utilities(8, rng);
  const auto k = ProposalKernel<double>::uniform(8);
  const auto path = run_chain(ChainConfig<double>::uniform(8, 1.0, 4242), u, k, 200'000);
  EXPECT_LT(total_variation(empirical_frequency(path, space), gibbs_distribution(space, u, 1.0)), 0.02);
}

// =============================================================================
// empirical_frequency / total_variation
// =============================================================================

TEST(EmpiricalFrequency, DirectCounts) {
  const auto f = empirical_frequency(Trajectory{0, 0, 1}, 2);
  EXPECT_NEAR(f(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f(1), 1.0 / 3.0, 1e-15);
  const auto point = empirical_frequency(Trajectory{3}, 4);
  EXPECT_EQ(point(3), 1.0);
  EXPECT_EQ(point.sum(), 1.0);
  EXPECT_THROW(empirical_frequency(Trajectory{}, 2), std::invalid_argument);
  EXPECT_THROW(empirical_frequency(Trajectory{0, 5}, 2), std::out_of_range);
}

TEST(EmpiricalFrequency, MatchesRecount) {
  Rng rng(4);
  Trajectory path;
  for (int i = 0; i < 1001; ++i) path.push_back(static_cast<Index>(rng.index(6)));
  const auto f = empirical_frequency(path, 6);
  for (Index a = 0; a < 6; ++a)
    EXPECT_EQ(f(a), static_cast<double>(std::count(path.begin(), path.end(), a)) / 1001.0);
}

TEST(TotalVariation, BasicValues) {
  EXPECT_EQ(total_variation(vec({0.2, 0.8}), vec({0.2, 0.8})), 0.0);
  EXPECT_EQ(total_variation(vec({1, 0}), vec({0, 1})), 1.0);
  EXPECT_EQ(total_variation(vec({1, 0}), vec({0.5, 0.5})), 0.5);
}
