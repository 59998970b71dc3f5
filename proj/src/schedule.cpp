#include "ergodic/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergodic {

AnnealingSchedule AnnealingSchedule::geometric(double beta0, double rho, std::int64_t loop_length) {
  if (!(beta0 > 0) || !std::isfinite(beta0)) throw std::domain_error("geometric_schedule: beta0 must be positive");
  if (!(rho > 0) || !std::isfinite(rho)) throw std::domain_error("geometric_schedule: rho must be positive");
  if (loop_length < 1) throw std::domain_error("geometric_schedule: loop length must be positive");
  AnnealingSchedule s;
  s.geometric_ = true;
  s.beta0_ = beta0;
  s.rho_ = rho;
  s.loop_length_ = loop_length;
  return s;
}

AnnealingSchedule AnnealingSchedule::from_checkpoints(std::vector<Checkpoint> checkpoints) {
  if (checkpoints.empty()) throw std::invalid_argument("annealing schedule needs at least one checkpoint");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const auto& c = checkpoints[k];
    if (c.step < 1) throw std::invalid_argument("schedule steps must be positive");
    if (!(c.beta > 0)) throw std::domain_error("schedule betas must be positive");
    if (k > 0 && (c.step <= checkpoints[k - 1].step || c.beta <= checkpoints[k - 1].beta))
      throw std::invalid_argument("schedule steps and betas must be strictly increasing");
  }
  AnnealingSchedule s;
  s.beta0_ = checkpoints.front().beta;
  s.checkpoints_ = std::move(checkpoints);
  return s;
}

AnnealingSchedule AnnealingSchedule::constant(double beta) { return from_checkpoints({{1, beta}}); }

double AnnealingSchedule::beta_at(std::int64_t n) const {
  if (n < 0) throw std::invalid_argument("beta_at: negative step");
  if (geometric_) {
    const auto k = static_cast<double>(n / loop_length_);
    return beta0_ * std::pow(1.0 + rho_, k);
  }
  // First checkpoint whose step exceeds n; steps past the last one hold beta_last.
  auto it = std::upper_bound(checkpoints_.begin(), checkpoints_.end(), n,
                             [](std::int64_t v, const Checkpoint& c) { return v < c.step; });
  if (it == checkpoints_.begin()) return checkpoints_.front().beta;
  if (it == checkpoints_.end()) return checkpoints_.back().beta;
  return it->beta;
}

Checkpoint AnnealingSchedule::checkpoint(std::size_t k) const {
  if (geometric_)
    return {static_cast<std::int64_t>(k + 1) * loop_length_, beta0_ * std::pow(1.0 + rho_, static_cast<double>(k))};
  return checkpoints_.at(k);
}

AnnealResult<Index> simulated_annealing(const FiniteActionSpace& space, const UtilityTable<double>& u,
                                        const ProposalKernel<double>& kernel, const AnnealingSchedule& schedule,
                                        const StopRule& stop, std::uint64_t seed, AnnealOptions options) {
  check_utilities(space, u);
  if (kernel.size() != space.size()) throw std::invalid_argument("kernel size does not match action space");
  Rng rng(seed);
  const Index a0 = sample_from(Distribution<double>::Constant(space.size(), 1.0 / double(space.size())).eval(), rng);
  TableModel model(u, kernel);
  return anneal(model, a0, schedule, stop, rng, options);
}

}  // namespace ergodic
