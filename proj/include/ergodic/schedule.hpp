#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergodic/chain.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

/// Pair (t_k, beta_k) of an annealing schedule.
struct Checkpoint {
  std::int64_t step = 0;
  double beta = 0;
};

/// Paired sequences {t_k, beta_k}. The geometric form (t_k = (k+1)L,
/// beta_k = (1+rho)^k beta_0) is evaluated lazily; an explicit form stores a
/// finite prefix and holds its last beta past the final checkpoint.
class AnnealingSchedule {
 public:
  static AnnealingSchedule geometric(double beta0, double rho, std::int64_t loop_length);
  static AnnealingSchedule from_checkpoints(std::vector<Checkpoint> checkpoints);
  /// A single inverse temperature for every step (plain Metropolis).
  static AnnealingSchedule constant(double beta);

  /// Inverse temperature of step n -> n+1: beta_0 for n < t_0, beta_{k+1} on [t_k, t_{k+1}).
  double beta_at(std::int64_t n) const;

  /// (t_k, beta_k). For explicit schedules k must index a stored checkpoint.
  Checkpoint checkpoint(std::size_t k) const;

  bool is_geometric() const { return geometric_; }
  double beta0() const { return beta0_; }
  double rho() const { return rho_; }
  std::int64_t loop_length() const { return loop_length_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

 private:
  AnnealingSchedule() = default;

  bool geometric_ = false;
  double beta0_ = 1;
  double rho_ = 0;
  std::int64_t loop_length_ = 1;
  std::vector<Checkpoint> checkpoints_;
};

inline double beta_at(const AnnealingSchedule& schedule, std::int64_t n) { return schedule.beta_at(n); }

/// Stop at freeze (freeze_window consecutive unchanged steps) or after max_iterations steps.
struct StopRule {
  std::int64_t max_iterations = 1'000'000;
  std::int64_t freeze_window = 2000;

  void validate() const {
    if (max_iterations < 1 || freeze_window < 1) throw std::invalid_argument("stop rule parameters must be positive");
  }
};

/// True iff the window holds freeze_window + 1 states and all of them are identical.
template <class State>
bool frozen(std::span<const State> window, std::int64_t freeze_window) {
  if (static_cast<std::int64_t>(window.size()) < freeze_window + 1 || window.empty()) return false;
  for (const State& s : window)
    if (!(s == window.front())) return false;
  return true;
}

template <class State>
struct TraceEntry {
  State state;
  double beta = 0;
  bool accepted = false;
};

template <class State>
struct AnnealResult {
  State final_state;
  /// Highest-objective state ever visited, including a_0.
  State best_state;
  double best_value = 0;
  /// Objective of final_state, on the same scale as best_value.
  double final_value = 0;
  std::int64_t iterations_used = 0;
  bool froze = false;
  std::vector<TraceEntry<State>> trace;
};

struct AnnealOptions {
  bool record_trace = false;
};

/// A maximization problem the annealer can drive. `utility` returns nullopt for
/// infeasible states; such proposals are rejected before the acceptance test.
template <class M>
concept AnnealingModel = requires(const M& m, const typename M::State& s, Rng& rng) {
  typename M::State;
  { m.propose(s, rng) } -> std::same_as<typename M::State>;
  { m.utility(s) } -> std::same_as<std::optional<double>>;
};

/// A model whose utilities are estimates refined by observing the realized
/// state after every step. `true_utility` is for the harness only and may be nullopt.
template <class M>
concept LearningModel = AnnealingModel<M> && requires(M& m, const M& cm, const typename M::State& s) {
  { m.observe(s) };
  { cm.true_utility(s) } -> std::same_as<std::optional<double>>;
};

/// The annealing loop. With a plain model each step is a Metropolis step on
/// the model's utility; with a learning model each step is a Macau step
/// (acceptance on current estimates, then one observation of the realized state).
template <AnnealingModel M>
AnnealResult<typename M::State> anneal(M& model, typename M::State initial, const AnnealingSchedule& schedule,
                                       const StopRule& stop, Rng& rng, AnnealOptions options = {}) {
  using State = typename M::State;
  constexpr bool learning = LearningModel<M>;
  stop.validate();

  auto scored = [&](const State& s) -> std::optional<double> {
    if constexpr (learning) {
      if (auto t = model.true_utility(s)) return t;
    }
    return model.utility(s);
  };

  State current = std::move(initial);
  std::optional<double> current_u = model.utility(current);
  if (!current_u) throw std::invalid_argument("anneal: initial state is infeasible");

  AnnealResult<State> result{current, current, 0, 0, 0, false, {}};
  result.best_value = *scored(current);

  std::int64_t unchanged = 0;
  std::int64_t n = 0;
  while (n < stop.max_iterations) {
    const double beta = schedule.beta_at(n);
    State proposal = model.propose(current, rng);
    if constexpr (learning) current_u = model.utility(current);

    bool accepted = false;
    if (std::optional<double> proposed_u = model.utility(proposal)) {
      if (*proposed_u >= *current_u) {
        accepted = true;
      } else {
        accepted = rng.uniform() < std::exp(beta * (*proposed_u - *current_u));
      }
      if (accepted) {
        const bool moved = !(proposal == current);
        current = std::move(proposal);
        current_u = proposed_u;
        unchanged = moved ? 0 : unchanged + 1;
      } else {
        ++unchanged;
      }
    } else {
      ++unchanged;
    }
    if constexpr (learning) model.observe(current);
    ++n;

    if (options.record_trace) result.trace.push_back({current, beta, accepted});
    const double value = learning ? *scored(current) : *current_u;
    if (value > result.best_value) {
      result.best_value = value;
      result.best_state = current;
    }
    if (unchanged >= stop.freeze_window) {
      result.froze = true;
      break;
    }
  }

  result.iterations_used = n;
  result.final_value = *scored(current);
  result.final_state = std::move(current);
  return result;
}

/// Abstract finite-action problem driven by a proposal kernel on a fixed utility table.
class TableModel {
 public:
  using State = Index;

  TableModel(const UtilityTable<double>& u, const ProposalKernel<double>& kernel) : u_(&u), kernel_(&kernel) {}

  State propose(State s, Rng& rng) const { return kernel_->sample(s, rng); }
  std::optional<double> utility(State s) const { return (*u_)(s); }

 private:
  const UtilityTable<double>* u_;
  const ProposalKernel<double>* kernel_;
};

/// Simulated Annealing over a finite action space. a_0 is drawn uniformly from
/// the seeded stream, so a constant schedule reproduces run_chain exactly.
AnnealResult<Index> simulated_annealing(const FiniteActionSpace& space, const UtilityTable<double>& u,
                                        const ProposalKernel<double>& kernel, const AnnealingSchedule& schedule,
                                        const StopRule& stop, std::uint64_t seed, AnnealOptions options = {});

/// Simulated Annealing on any model from a given initial state.
template <AnnealingModel M>
AnnealResult<typename M::State> simulated_annealing(M& model, typename M::State initial,
                                                    const AnnealingSchedule& schedule, const StopRule& stop,
                                                    std::uint64_t seed, AnnealOptions options = {}) {
  Rng rng(seed);
  return anneal(model, std::move(initial), schedule, stop, rng, options);
}

}  // namespace ergodic
