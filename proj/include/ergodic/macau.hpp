#pragma once

// Metropolis on estimated payoffs: running-average estimators, stochastic
// payoff environments, the Macau step, Ergodic Annealing and the empirical
// conjecture checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/chain.hpp"
#include "ergodic/schedule.hpp"

namespace ergodic {

/// Per-action running means u_n with visit counts and prior u_0.
class TabularEstimator {
 public:
  TabularEstimator(Index size, double prior);
  explicit TabularEstimator(Vector<double> prior);

  Index size() const { return estimates_.size(); }
  double estimate(Index a) const { return estimates_(a); }
  std::int64_t count(Index a) const { return counts_[static_cast<std::size_t>(a)]; }
  double prior(Index a) const { return prior_(a); }
  const Vector<double>& estimates() const { return estimates_; }
  std::int64_t total_count() const;
  /// Entries never observed (still at their prior).
  Index unobserved_count() const;

  /// C <- C + 1, then u <- ((C-1)/C) u + v / C. The first observation replaces the prior.
  void update(Index a, double observation);

 private:
  Vector<double> estimates_;
  Vector<double> prior_;
  std::vector<std::int64_t> counts_;
};

/// Per-component running means; a configuration's value is the sum of its components' estimates.
class DecomposedEstimator {
 public:
  DecomposedEstimator(Index components, double prior) : table_(components, prior) {}

  Index size() const { return table_.size(); }
  const TabularEstimator& components() const { return table_; }
  std::span<const double> values() const { return {table_.estimates().data(), static_cast<std::size_t>(size())}; }
  double estimate(Index c) const { return table_.estimate(c); }
  std::int64_t count(Index c) const { return table_.count(c); }
  Index unobserved_count() const { return table_.unobserved_count(); }

  double configuration_value(std::span<const Index> components) const;
  void update(Index component, double observation) { table_.update(component, observation); }

 private:
  TabularEstimator table_;
};

void macau_update(TabularEstimator& estimator, Index chosen, double observation);
/// Applies the running-mean update to each observed component in turn.
void macau_update(DecomposedEstimator& estimator, std::span<const Index> components,
                  std::span<const double> observations);

/// Random payoff U(a) per action. The optional true means are for the
/// evaluation harness; optimizers only ever see a PayoffSampler.
class PayoffEnvironment {
 public:
  using Sampler = std::function<double(Index, Rng&)>;

  PayoffEnvironment(Index size, Sampler sampler, std::optional<Vector<double>> true_means = std::nullopt);

  /// v = u(a) exactly.
  static PayoffEnvironment deterministic(Vector<double> means);
  /// v = u(a) * X with X ~ uniform[1-w, 1+w].
  static PayoffEnvironment multiplicative_uniform(Vector<double> means, double half_width);
  /// v = u(a) + Y with Y ~ uniform[-h, h].
  static PayoffEnvironment additive_uniform(Vector<double> means, double half_width);

  Index size() const { return size_; }
  double sample(Index a, Rng& rng) const { return sampler_(a, rng); }
  bool has_true_means() const { return true_means_.has_value(); }
  const Vector<double>& true_means() const;

 private:
  Index size_;
  Sampler sampler_;
  std::optional<Vector<double>> true_means_;
};

/// The agent-facing view of an environment: draws only.
class PayoffSampler {
 public:
  PayoffSampler(const PayoffEnvironment& env) : env_(&env) {}  // NOLINT(google-explicit-constructor)
  Index size() const { return env_->size(); }
  double operator()(Index a, Rng& rng) const { return env_->sample(a, rng); }

 private:
  const PayoffEnvironment* env_;
};

/// One Macau step: propose from the kernel, accept on the current estimates,
/// then observe the realized next state (accepted or retained) and update.
/// Chain draws come from `chain_rng`, payoff draws from `env_rng`.
Index macau_step(Index current, TabularEstimator& estimator, PayoffSampler env, double beta,
                 const ProposalKernel<double>& kernel, Rng& chain_rng, Rng& env_rng);

/// Runs a_0 ~ uniform then `steps` Macau steps; returns a_0..a_steps.
Trajectory run_macau_chain(TabularEstimator& estimator, PayoffSampler env, double beta,
                           const ProposalKernel<double>& kernel, std::int64_t steps, std::uint64_t seed);

/// Finite-action learning model for the annealing engine.
class TabularLearningModel {
 public:
  using State = Index;

  TabularLearningModel(TabularEstimator& estimator, PayoffSampler env, const ProposalKernel<double>& kernel,
                       Rng env_rng, const Vector<double>* truth = nullptr)
      : estimator_(&estimator), env_(env), kernel_(&kernel), env_rng_(std::move(env_rng)), truth_(truth) {}

  State propose(State s, Rng& rng) const { return kernel_->sample(s, rng); }
  std::optional<double> utility(State s) const { return estimator_->estimate(s); }
  std::optional<double> true_utility(State s) const {
    if (!truth_) return std::nullopt;
    return (*truth_)(s);
  }
  void observe(State s) { estimator_->update(s, env_(s, env_rng_)); }

 private:
  TabularEstimator* estimator_;
  PayoffSampler env_;
  const ProposalKernel<double>* kernel_;
  Rng env_rng_;
  const Vector<double>* truth_;
};

template <class State>
struct ErgodicResult {
  /// Best-ever and final values are on the true scale when the environment exposes it.
  AnnealResult<State> anneal;
  double final_estimated_value = 0;
  std::optional<double> final_true_value;
};

/// Ergodic Annealing on any learning model: the annealing loop with Macau steps.
template <LearningModel M>
ErgodicResult<typename M::State> ergodic_annealing(M& model, typename M::State initial,
                                                   const AnnealingSchedule& schedule, const StopRule& stop,
                                                   std::uint64_t seed, AnnealOptions options = {}) {
  Rng rng(seed);
  ErgodicResult<typename M::State> out;
  out.anneal = anneal(model, std::move(initial), schedule, stop, rng, options);
  out.final_estimated_value = *model.utility(out.anneal.final_state);
  out.final_true_value = model.true_utility(out.anneal.final_state);
  return out;
}

struct TabularErgodicResult {
  ErgodicResult<Index> result;
  TabularEstimator estimator;
};

/// Ergodic Annealing over a finite action space with a tabular estimator.
/// Chain stream = derive_seed(seed, 0), payoff stream = derive_seed(seed, 1).
TabularErgodicResult ergodic_annealing(const PayoffEnvironment& env, TabularEstimator estimator,
                                       const ProposalKernel<double>& kernel, const AnnealingSchedule& schedule,
                                       const StopRule& stop, std::uint64_t seed, AnnealOptions options = {});

struct ConjectureConfig {
  double beta = 1;
  /// Length of the single long run used for the time-average check.
  std::int64_t steps = 500'000;
  /// Index n at which the replica ensemble is read off.
  std::int64_t asymptotic_steps = 20'000;
  std::int64_t replicas = 2000;
  double prior = 0.5;
  std::uint64_t seed = 0;
};

struct ConjectureReport {
  double beta = 0;
  std::int64_t steps = 0;
  std::int64_t asymptotic_steps = 0;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
  double tv_ergodic = 0;
  double tv_asymptotic = 0;
};

/// TV between the long-run visit frequency of one Macau run and p_beta of the true means.
double ergodic_tv(const PayoffEnvironment& env, const ConjectureConfig& config);
/// TV between the law of a_n across independent replicas and p_beta of the true means.
double asymptotic_tv(const PayoffEnvironment& env, const ConjectureConfig& config);
ConjectureReport conjecture_report(const PayoffEnvironment& env, const ConjectureConfig& config);

nlohmann::json to_json(const ConjectureReport& report);

}  // namespace ergodic
