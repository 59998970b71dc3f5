#pragma once

// Layered directed Steiner tree instances. Configurations are subsets of the
// potential Steiner nodes (layers 1..L-1); a configuration is scored by the
// minimum arborescence of the subgraph induced by the root, the selected nodes
// and the terminals.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/macau.hpp"
#include "ergodic/rng.hpp"

namespace ergodic::steiner {

struct Edge {
  int tail = 0;
  int head = 0;
  double cost = 0;
};

/// Vertices carry flat ids 0..V-1; the (layer, index) pair of a vertex is its
/// position inside `layers()`. Layer 0 is {root}, the last layer holds the terminals.
class LayeredDag {
 public:
  LayeredDag(std::vector<std::vector<int>> layers, std::vector<Edge> edges);

  const std::vector<std::vector<int>>& layers() const { return layers_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_vertices() const { return static_cast<int>(layer_of_.size()); }
  int root() const { return layers_.front().front(); }
  const std::vector<int>& terminals() const { return layers_.back(); }
  int layer_of(int v) const { return layer_of_.at(static_cast<std::size_t>(v)); }

  /// Edge ids entering v, in edge-list order.
  const std::vector<int>& in_edges(int v) const { return in_edges_.at(static_cast<std::size_t>(v)); }

  /// Potential Steiner nodes in layer order; configuration bit i refers to steiner_nodes()[i].
  const std::vector<int>& steiner_nodes() const { return steiner_nodes_; }
  int num_steiner() const { return static_cast<int>(steiner_nodes_.size()); }
  /// Bit position of v in a configuration, or -1 for root and terminals.
  int steiner_slot(int v) const { return steiner_slot_.at(static_cast<std::size_t>(v)); }

  /// Edge id of (tail, head), or -1.
  int find_edge(int tail, int head) const;

  std::vector<double> true_costs() const;

  friend bool operator==(const LayeredDag& a, const LayeredDag& b);

 private:
  std::vector<std::vector<int>> layers_;
  std::vector<Edge> edges_;
  std::vector<int> layer_of_;
  std::vector<std::vector<int>> in_edges_;
  std::vector<int> steiner_nodes_;
  std::vector<int> steiner_slot_;
};

/// Membership bit per potential Steiner node.
struct SteinerConfig {
  std::vector<bool> selected;

  static SteinerConfig all(const LayeredDag& dag) { return {std::vector<bool>(dag.num_steiner(), true)}; }
  static SteinerConfig none(const LayeredDag& dag) { return {std::vector<bool>(dag.num_steiner(), false)}; }

  std::size_t size() const { return selected.size(); }
  std::size_t count() const;
  friend bool operator==(const SteinerConfig&, const SteinerConfig&) = default;
};

struct DstGenParams {
  int num_layers = 13;
  int max_nodes_per_layer = 12;
  int min_nodes_per_layer = 2;
  double extra_edge_probability = 0.5;

  void validate() const;
  friend bool operator==(const DstGenParams&, const DstGenParams&) = default;
};

struct DstInstance {
  LayeredDag dag;
  std::uint64_t seed = 0;
  DstGenParams params;
};

/// Random layered instance: non-root layer sizes uniform on {min..max}, one
/// forced in-edge per non-root vertex from a uniformly chosen predecessor,
/// every other consecutive-layer pair present independently, costs uniform on (0,1).
DstInstance generate_dst(const DstGenParams& params, std::uint64_t seed);

struct Arborescence {
  std::vector<int> edges;
  double total_cost = 0;
};

/// Per-vertex cheapest in-edge within the induced subgraph. Optimal because the
/// graph is a layered DAG. nullopt iff some induced non-root vertex has no
/// induced in-edge. Ties go to the lowest edge id.
std::optional<Arborescence> min_arborescence(const LayeredDag& dag, const SteinerConfig& config,
                                             std::span<const double> costs);

/// Structural feasibility (independent of costs).
bool feasible(const LayeredDag& dag, const SteinerConfig& config);

/// Cost of the minimum arborescence, nullopt when infeasible. The annealer maximizes u = -cost.
std::optional<double> dst_objective(const LayeredDag& dag, const SteinerConfig& config, std::span<const double> costs);

/// Flips one uniformly chosen potential Steiner node.
SteinerConfig toggle_move(const SteinerConfig& config, const LayeredDag& dag, Rng& rng);

struct DstOptimum {
  SteinerConfig config;
  double cost = 0;
};

/// Exhaustive search over all 2^S subsets; refuses S > 20.
DstOptimum brute_force_dst(const LayeredDag& dag);

/// Known-cost model for Simulated Annealing.
class DstModel {
 public:
  using State = SteinerConfig;

  explicit DstModel(const LayeredDag& dag) : dag_(&dag), costs_(dag.true_costs()) {}

  State propose(const State& s, Rng& rng) const { return toggle_move(s, *dag_, rng); }
  std::optional<double> utility(const State& s) const {
    auto c = dst_objective(*dag_, s, costs_);
    if (!c) return std::nullopt;
    return -*c;
  }

 private:
  const LayeredDag* dag_;
  std::vector<double> costs_;
};

/// Unknown-cost model for Ergodic Annealing. Configurations are evaluated on
/// per-edge estimates; after each step every edge of the realized
/// configuration's arborescence is observed. Edge costs are deterministic.
class DstLearningModel {
 public:
  using State = SteinerConfig;

  DstLearningModel(const LayeredDag& dag, DecomposedEstimator& estimator, bool expose_truth = true);

  State propose(const State& s, Rng& rng) const { return toggle_move(s, *dag_, rng); }
  std::optional<double> utility(const State& s) const;
  std::optional<double> true_utility(const State& s) const;
  void observe(const State& s);

 private:
  const LayeredDag* dag_;
  DecomposedEstimator* estimator_;
  std::vector<double> true_costs_;
  bool expose_truth_;
};

nlohmann::json to_json(const DstInstance& instance);
DstInstance dst_instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DstGenParams& params);
DstGenParams dst_params_from_json(const nlohmann::json& j);

}  // namespace ergodic::steiner
