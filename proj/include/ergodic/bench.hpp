#pragma once

// Head-to-head benchmark of Simulated Annealing (known costs) against Ergodic
// Annealing (learned costs) on generated instance sets.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/schedule.hpp"
#include "ergodic/steiner.hpp"
#include "ergodic/tsp.hpp"

namespace ergodic::bench {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem { dst, tsp, abstract };
enum class EstimatorKind { decomposed, tabular };

std::string to_string(Problem p);
std::string to_string(EstimatorKind k);

struct ExperimentConfig {
  Problem problem = Problem::dst;
  int instance_count = 100;
  std::uint64_t master_seed = 0;

  // Geometric schedule; the loop length is loop_length_factor * instance size.
  double beta0 = 1.0;
  double rho = 0.05;
  std::int64_t loop_length_factor = 50;
  StopRule stop{4'000'000, 2000};

  steiner::DstGenParams dst;
  double dst_prior = 0.5;

  int tsp_min_cities = 30;
  int tsp_max_cities = 90;
  tsp::TravelNoise tsp_noise{0.5};
  double tsp_prior = 0.5;

  int abstract_actions = 16;
  double abstract_noise_half_width = 0.25;
  double abstract_prior = 0.5;

  /// Unset means the natural choice for the problem (tabular for abstract, decomposed otherwise).
  std::optional<EstimatorKind> estimator;
  /// EA reuses SA's chain seed instead of an independent one.
  bool share_chain_seed = false;
  int threads = 1;
  /// Wall times make reports non-reproducible, so they are opt-in.
  bool record_wall_time = false;

  EstimatorKind estimator_kind() const;
  void validate() const;
};

/// Parses the flat `key = value` format ('#' starts a comment). Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Every key with its effective value, in the same format parse_config reads.
std::map<std::string, std::string> config_entries(const ExperimentConfig& config);

/// Seed of instance i; depends only on (master_seed, i).
std::uint64_t instance_seed(std::uint64_t master_seed, int instance_id);

/// |a - b| / min(a, b) for positive costs.
double deviation(double cost_a, double cost_b);

struct InstanceRecord {
  int instance_id = 0;
  int size = 0;
  double sa_cost = 0;
  double ea_cost = 0;
  double ea_estimated_cost = 0;
  bool agree = false;
  double deviation = 0;
  std::int64_t sa_iters = 0;
  std::int64_t ea_iters = 0;
  bool sa_froze = false;
  bool ea_froze = false;
  std::int64_t ea_unobserved_components = 0;
  bool ea_unobserved_at_prior = false;
  std::optional<double> sa_wall_seconds;
  std::optional<double> ea_wall_seconds;
  std::optional<std::string> error;
};

struct Aggregates {
  int instance_count = 0;
  int failed_count = 0;
  int agreement_count = 0;
  int ea_not_worse_count = 0;
  double mean_deviation = 0;
  double mean_size = 0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<InstanceRecord> records;
  Aggregates aggregates;
};

/// Generates instance i and runs SA and EA on it. Exceptions propagate.
InstanceRecord run_instance(const ExperimentConfig& config, int instance_id);

/// Full sweep; per-instance failures are recorded and excluded from aggregates.
RunReport run_benchmark(const ExperimentConfig& config);

Aggregates aggregate(const std::vector<InstanceRecord>& records);

nlohmann::json to_json(const RunReport& report);
std::string to_json_text(const RunReport& report);
inline constexpr const char* kCsvHeader = "instance_id,size,sa_cost,ea_cost,agree,deviation,sa_iters,ea_iters";
std::string to_csv(const RunReport& report);

/// Instance i of the sweep, as a JSON instance document.
nlohmann::json generate_instance_json(const ExperimentConfig& config, int instance_id);

/// Runs SA (learned = false) or EA (learned = true) on one serialized instance.
nlohmann::json solve_instance_json(const nlohmann::json& instance, const ExperimentConfig& config, std::uint64_t seed,
                                   bool learned);

}  // namespace ergodic::bench
