#include "ergodic/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergodic::tsp {

TspInstance::TspInstance(std::vector<Point> cities, std::uint64_t seed) : cities_(std::move(cities)), seed_(seed) {
  const int n = size();
  if (n < 3) throw std::domain_error("TSP instance needs at least 3 cities");
  for (const auto& p : cities_)
    if (!(p[0] >= 0 && p[0] <= 1 && p[1] >= 0 && p[1] <= 1))
      throw std::invalid_argument("city coordinates must lie in the unit square");
  mean_times_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      mean_times_[pair_index(n, i, j)] = std::hypot(cities_[static_cast<std::size_t>(i)][0] - cities_[static_cast<std::size_t>(j)][0],
                                                    cities_[static_cast<std::size_t>(i)][1] - cities_[static_cast<std::size_t>(j)][1]);
}

void TravelNoise::validate() const {
  if (!(half_width >= 0 && half_width < 1)) throw std::domain_error("travel noise half-width must lie in [0, 1)");
}

TspInstance generate_tsp(int n, std::uint64_t seed) {
  if (n < 3) throw std::domain_error("generate_tsp: need at least 3 cities");
  Rng rng(seed);
  std::vector<Point> cities(static_cast<std::size_t>(n));
  for (auto& p : cities) {
    p[0] = rng.uniform();
    p[1] = rng.uniform();
  }
  return TspInstance(std::move(cities), seed);
}

bool is_permutation_tour(const Tour& tour, int n) {
  if (static_cast<int>(tour.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int c : tour) {
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = 1;
  }
  return true;
}

Tour canonical_tour(const Tour& tour) {
  const int n = static_cast<int>(tour.size());
  if (!is_permutation_tour(tour, n)) throw std::invalid_argument("canonical_tour: not a permutation");
  const auto start = static_cast<int>(std::find(tour.begin(), tour.end(), 0) - tour.begin());
  const int next = tour[static_cast<std::size_t>((start + 1) % n)];
  const int prev = tour[static_cast<std::size_t>((start + n - 1) % n)];
  const int step = next <= prev ? 1 : n - 1;
  Tour out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = tour[static_cast<std::size_t>((start + k * step) % n)];
  return out;
}

double tour_cost(const TspInstance& instance, const Tour& tour, std::span<const double> costs) {
  const int n = instance.size();
  if (static_cast<int>(tour.size()) != n) throw std::invalid_argument("tour_cost: tour size mismatch");
  if (costs.size() != instance.num_legs()) throw std::invalid_argument("tour_cost: cost view size mismatch");
  double total = 0;
  for (int k = 0; k < n; ++k)
    total += costs[pair_index(n, tour[static_cast<std::size_t>(k)], tour[static_cast<std::size_t>((k + 1) % n)])];
  return total;
}

std::vector<Index> tour_legs(const TspInstance& instance, const Tour& tour) {
  const int n = instance.size();
  std::vector<Index> legs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    legs[static_cast<std::size_t>(k)] = static_cast<Index>(
        pair_index(n, tour[static_cast<std::size_t>(k)], tour[static_cast<std::size_t>((k + 1) % n)]));
  return legs;
}

Tour two_opt_reverse(const Tour& tour, int first, int second) {
  if (first > second) std::swap(first, second);
  Tour out = tour;
  std::reverse(out.begin() + first + 1, out.begin() + second + 1);
  return out;
}

Tour two_opt_move(const Tour& tour, Rng& rng) {
  const int n = static_cast<int>(tour.size());
  if (n < 4) return tour;
  for (;;) {
    auto a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    auto b = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    if (a > b) std::swap(a, b);
    if (b - a < 2 || (a == 0 && b == n - 1)) continue;
    return two_opt_reverse(tour, a, b);
  }
}

double sample_leg(const TspInstance& instance, const TravelNoise& noise, int i, int j, Rng& rng) {
  if (i == j) throw std::invalid_argument("sample_leg: i == j");
  return instance.mean_time(i, j) * (1.0 - noise.half_width + 2.0 * noise.half_width * rng.uniform());
}

TspOptimum brute_force_tsp(const TspInstance& instance) {
  const int n = instance.size();
  if (n > 10) throw std::invalid_argument("brute_force_tsp: more than 10 cities");
  Tour tour(static_cast<std::size_t>(n));
  std::iota(tour.begin(), tour.end(), 0);
  std::optional<TspOptimum> best;
  do {
    if (tour[1] > tour.back()) continue;  // each cycle once per direction
    const double c = tour_cost(instance, tour, instance.mean_times());
    if (!best || c < best->cost) best = TspOptimum{tour, c};
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  return *best;
}

TspLearningModel::TspLearningModel(const TspInstance& instance, DecomposedEstimator& estimator, TravelNoise noise,
                                   Rng env_rng, bool expose_truth)
    : instance_(&instance), estimator_(&estimator), noise_(noise), env_rng_(std::move(env_rng)),
      expose_truth_(expose_truth) {
  noise_.validate();
  if (estimator.size() != static_cast<Index>(instance.num_legs()))
    throw std::invalid_argument("estimator must hold one component per city pair");
}

std::optional<double> TspLearningModel::true_utility(const State& s) const {
  if (!expose_truth_) return std::nullopt;
  return -tour_cost(*instance_, s, instance_->mean_times());
}

void TspLearningModel::observe(const State& s) {
  const int n = instance_->size();
  for (int k = 0; k < n; ++k) {
    const int i = s[static_cast<std::size_t>(k)];
    const int j = s[static_cast<std::size_t>((k + 1) % n)];
    estimator_->update(static_cast<Index>(pair_index(n, i, j)), sample_leg(*instance_, noise_, i, j, env_rng_));
  }
}

nlohmann::json to_json(const TspInstance& instance) {
  nlohmann::json cities = nlohmann::json::array();
  for (const auto& p : instance.cities()) cities.push_back({p[0], p[1]});
  return {{"schema_version", 1}, {"problem", "tsp"}, {"cities", std::move(cities)}, {"seed", instance.seed()}};
}

TspInstance tsp_instance_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != 1) throw std::invalid_argument("unsupported TSP instance schema_version");
  if (j.contains("problem") && j.at("problem").get<std::string>() != "tsp")
    throw std::invalid_argument("not a TSP instance");
  std::vector<Point> cities;
  for (const auto& p : j.at("cities")) cities.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return TspInstance(std::move(cities), j.at("seed").get<std::uint64_t>());
}

}  // namespace ergodic::tsp
