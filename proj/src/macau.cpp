#include "ergodic/macau.hpp"

#include <cmath>
#include <stdexcept>

namespace ergodic {

TabularEstimator::TabularEstimator(Index size, double prior)
    : TabularEstimator(Vector<double>::Constant(size, prior)) {}

TabularEstimator::TabularEstimator(Vector<double> prior)
    : estimates_(prior), prior_(std::move(prior)), counts_(static_cast<std::size_t>(prior_.size()), 0) {
  if (prior_.size() < 1) throw std::invalid_argument("estimator needs at least one entry");
  if (!prior_.allFinite()) throw std::domain_error("estimator prior must be finite");
}

std::int64_t TabularEstimator::total_count() const {
  std::int64_t total = 0;
  for (auto c : counts_) total += c;
  return total;
}

Index TabularEstimator::unobserved_count() const {
  Index n = 0;
  for (auto c : counts_) n += (c == 0);
  return n;
}

void TabularEstimator::update(Index a, double observation) {
  if (!std::isfinite(observation)) throw std::domain_error("estimator observation must be finite");
  auto& c = counts_.at(static_cast<std::size_t>(a));
  ++c;
  const double weight = 1.0 / static_cast<double>(c);
  estimates_(a) = (static_cast<double>(c - 1) * weight) * estimates_(a) + weight * observation;
}

double DecomposedEstimator::configuration_value(std::span<const Index> components) const {
  double total = 0;
  for (Index c : components) total += table_.estimate(c);
  return total;
}

void macau_update(TabularEstimator& estimator, Index chosen, double observation) {
  estimator.update(chosen, observation);
}

void macau_update(DecomposedEstimator& estimator, std::span<const Index> components,
                  std::span<const double> observations) {
  if (components.size() != observations.size()) throw std::invalid_argument("macau_update: size mismatch");
  for (std::size_t i = 0; i < components.size(); ++i) estimator.update(components[i], observations[i]);
}

PayoffEnvironment::PayoffEnvironment(Index size, Sampler sampler, std::optional<Vector<double>> true_means)
    : size_(size), sampler_(std::move(sampler)), true_means_(std::move(true_means)) {
  if (size_ < 1) throw std::invalid_argument("environment needs at least one action");
  if (true_means_ && true_means_->size() != size_) throw std::invalid_argument("true means size mismatch");
}

PayoffEnvironment PayoffEnvironment::deterministic(Vector<double> means) {
  const Index n = means.size();
  return {n, [means](Index a, Rng&) { return means(a); }, means};
}

PayoffEnvironment PayoffEnvironment::multiplicative_uniform(Vector<double> means, double half_width) {
  if (!(half_width >= 0 && half_width < 1)) throw std::domain_error("multiplicative noise half-width must be in [0, 1)");
  const Index n = means.size();
  return {n,
          [means, half_width](Index a, Rng& rng) {
            return means(a) * (1.0 - half_width + 2.0 * half_width * rng.uniform());
          },
          means};
}

PayoffEnvironment PayoffEnvironment::additive_uniform(Vector<double> means, double half_width) {
  if (!(half_width >= 0)) throw std::domain_error("additive noise half-width must be non-negative");
  const Index n = means.size();
  return {n,
          [means, half_width](Index a, Rng& rng) { return means(a) + half_width * (2.0 * rng.uniform() - 1.0); },
          means};
}

const Vector<double>& PayoffEnvironment::true_means() const {
  if (!true_means_) throw UnsupportedOperation("environment does not expose true means");
  return *true_means_;
}

Index macau_step(Index current, TabularEstimator& estimator, PayoffSampler env, double beta,
                 const ProposalKernel<double>& kernel, Rng& chain_rng, Rng& env_rng) {
  const Index next = metropolis_step(current, estimator.estimates(), beta, kernel, chain_rng);
  estimator.update(next, env(next, env_rng));
  return next;
}

Trajectory run_macau_chain(TabularEstimator& estimator, PayoffSampler env, double beta,
                           const ProposalKernel<double>& kernel, std::int64_t steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("run_macau_chain: steps must be positive");
  if (estimator.size() != env.size() || kernel.size() != env.size())
    throw std::invalid_argument("run_macau_chain: size mismatch");
  Rng chain_rng(seed);
  Rng env_rng = Rng::stream(seed, 1);
  const Index n = env.size();
  Trajectory states;
  states.reserve(static_cast<std::size_t>(steps) + 1);
  states.push_back(sample_from(Distribution<double>::Constant(n, 1.0 / double(n)).eval(), chain_rng));
  for (std::int64_t i = 0; i < steps; ++i)
    states.push_back(macau_step(states.back(), estimator, env, beta, kernel, chain_rng, env_rng));
  return states;
}

TabularErgodicResult ergodic_annealing(const PayoffEnvironment& env, TabularEstimator estimator,
                                       const ProposalKernel<double>& kernel, const AnnealingSchedule& schedule,
                                       const StopRule& stop, std::uint64_t seed, AnnealOptions options) {
  if (estimator.size() != env.size() || kernel.size() != env.size())
    throw std::invalid_argument("ergodic_annealing: size mismatch");
  const Vector<double>* truth = env.has_true_means() ? &env.true_means() : nullptr;
  Rng chain_rng(seed);
  const Index n = env.size();
  const Index a0 = sample_from(Distribution<double>::Constant(n, 1.0 / double(n)).eval(), chain_rng);

  TabularLearningModel model(estimator, env, kernel, Rng::stream(seed, 1), truth);
  ErgodicResult<Index> result;
  result.anneal = anneal(model, a0, schedule, stop, chain_rng, options);
  result.final_estimated_value = *model.utility(result.anneal.final_state);
  result.final_true_value = model.true_utility(result.anneal.final_state);
  return {std::move(result), std::move(estimator)};
}

namespace {

Distribution<double> gibbs_of_truth(const PayoffEnvironment& env, double beta) {
  if (!env.has_true_means()) throw UnsupportedOperation("conjecture checks need an environment with true means");
  const auto space = FiniteActionSpace::indexed(env.size());
  return gibbs_distribution(space, env.true_means(), beta);
}

}  // namespace

double ergodic_tv(const PayoffEnvironment& env, const ConjectureConfig& config) {
  const Distribution<double> target = gibbs_of_truth(env, config.beta);
  const auto kernel = ProposalKernel<double>::uniform(env.size());
  TabularEstimator estimator(env.size(), config.prior);
  const Trajectory path = run_macau_chain(estimator, env, config.beta, kernel, config.steps, config.seed);
  return total_variation(empirical_frequency(path, env.size()), target);
}

double asymptotic_tv(const PayoffEnvironment& env, const ConjectureConfig& config) {
  if (config.replicas < 1) throw std::invalid_argument("asymptotic_tv: replicas must be positive");
  const Distribution<double> target = gibbs_of_truth(env, config.beta);
  const auto kernel = ProposalKernel<double>::uniform(env.size());
  Trajectory finals;
  finals.reserve(static_cast<std::size_t>(config.replicas));
  for (std::int64_t r = 0; r < config.replicas; ++r) {
    TabularEstimator estimator(env.size(), config.prior);
    const Trajectory path = run_macau_chain(estimator, env, config.beta, kernel, config.asymptotic_steps,
                                            derive_seed(config.seed, static_cast<std::uint64_t>(r) + 2));
    finals.push_back(path.back());
  }
  return total_variation(empirical_frequency(finals, env.size()), target);
}

ConjectureReport conjecture_report(const PayoffEnvironment& env, const ConjectureConfig& config) {
  ConjectureReport report;
  report.beta = config.beta;
  report.steps = config.steps;
  report.asymptotic_steps = config.asymptotic_steps;
  report.replicas = config.replicas;
  report.seed = config.seed;
  report.tv_ergodic = ergodic_tv(env, config);
  report.tv_asymptotic = asymptotic_tv(env, config);
  return report;
}

nlohmann::json to_json(const ConjectureReport& report) {
  return nlohmann::json{{"schema_version", 1},
                        {"beta", report.beta},
                        {"steps", report.steps},
                        {"asymptotic_steps", report.asymptotic_steps},
                        {"replicas", report.replicas},
                        {"seed", report.seed},
                        {"tv_ergodic", report.tv_ergodic},
                        {"tv_asymptotic", report.tv_asymptotic}};
}

}  // namespace ergodic
