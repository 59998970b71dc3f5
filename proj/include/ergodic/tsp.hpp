#pragma once

// Euclidean TSP with stochastic travel times. Leg costs are stored per
// unordered city pair, so a cost view is a span indexed by pair_index(i, j).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/macau.hpp"
#include "ergodic/rng.hpp"

namespace ergodic::tsp {

using Point = std::array<double, 2>;
using Tour = std::vector<int>;

/// Index of the unordered pair {i, j}, i != j, in 0..n(n-1)/2-1.
inline std::size_t pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j), m = static_cast<std::size_t>(n);
  return a * m - a * (a + 1) / 2 + (b - a - 1);
}

class TspInstance {
 public:
  explicit TspInstance(std::vector<Point> cities, std::uint64_t seed = 0);

  int size() const { return static_cast<int>(cities_.size()); }
  const std::vector<Point>& cities() const { return cities_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_legs() const { return mean_times_.size(); }

  double mean_time(int i, int j) const { return i == j ? 0.0 : mean_times_[pair_index(size(), i, j)]; }
  /// Euclidean distances, pair-indexed.
  std::span<const double> mean_times() const { return mean_times_; }

 private:
  std::vector<Point> cities_;
  std::uint64_t seed_;
  std::vector<double> mean_times_;
};

/// Realized leg time = mean * X, X ~ uniform[1-w, 1+w], i.i.d. per traversal.
struct TravelNoise {
  double half_width = 0.5;
  void validate() const;
};

/// n i.i.d. uniform points in the unit square.
TspInstance generate_tsp(int n, std::uint64_t seed);

/// Starts at city 0; the neighbour listed second is the smaller of 0's two neighbours.
Tour canonical_tour(const Tour& tour);
bool is_permutation_tour(const Tour& tour, int n);

/// Sum of the cost view over the n cyclic legs.
double tour_cost(const TspInstance& instance, const Tour& tour, std::span<const double> costs);

/// Pair ids of the tour's n cyclic legs.
std::vector<Index> tour_legs(const TspInstance& instance, const Tour& tour);

/// Reverses order[first+1..second] (positions), removing legs `first` and `second`.
Tour two_opt_reverse(const Tour& tour, int first, int second);

/// Uniform over the n(n-3)/2 pairs of non-adjacent legs; reverses the segment
/// between them. Identity for n < 4.
Tour two_opt_move(const Tour& tour, Rng& rng);

double sample_leg(const TspInstance& instance, const TravelNoise& noise, int i, int j, Rng& rng);

struct TspOptimum {
  Tour tour;
  double cost = 0;
};

/// Exhaustive over (n-1)!/2 tours; refuses n > 10.
TspOptimum brute_force_tsp(const TspInstance& instance);

/// Known-mean model for Simulated Annealing.
class TspModel {
 public:
  using State = Tour;

  explicit TspModel(const TspInstance& instance) : instance_(&instance) {}

  State propose(const State& s, Rng& rng) const { return two_opt_move(s, rng); }
  std::optional<double> utility(const State& s) const { return -tour_cost(*instance_, s, instance_->mean_times()); }

 private:
  const TspInstance* instance_;
};

/// Unknown-mean model for Ergodic Annealing; every leg of the realized tour is
/// sampled and folded into the per-pair estimates after each step.
class TspLearningModel {
 public:
  using State = Tour;

  TspLearningModel(const TspInstance& instance, DecomposedEstimator& estimator, TravelNoise noise, Rng env_rng,
                   bool expose_truth = true);

  State propose(const State& s, Rng& rng) const { return two_opt_move(s, rng); }
  std::optional<double> utility(const State& s) const { return -tour_cost(*instance_, s, estimator_->values()); }
  std::optional<double> true_utility(const State& s) const;
  void observe(const State& s);

 private:
  const TspInstance* instance_;
  DecomposedEstimator* estimator_;
  TravelNoise noise_;
  Rng env_rng_;
  bool expose_truth_;
};

nlohmann::json to_json(const TspInstance& instance);
TspInstance tsp_instance_from_json(const nlohmann::json& j);

}  // namespace ergodic::tsp
