#include "ergodic/steiner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ergodic::steiner {

LayeredDag::LayeredDag(std::vector<std::vector<int>> layers, std::vector<Edge> edges)
    : layers_(std::move(layers)), edges_(std::move(edges)) {
  if (layers_.size() < 3) throw std::invalid_argument("layered DAG needs at least 3 layers");
  if (layers_.front().size() != 1) throw std::invalid_argument("layer 0 must hold exactly the root");

  std::size_t total = 0;
  for (const auto& layer : layers_) {
    if (layer.empty()) throw std::invalid_argument("empty layer");
    total += layer.size();
  }
  layer_of_.assign(total, -1);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    for (int v : layers_[l]) {
      if (v < 0 || static_cast<std::size_t>(v) >= total || layer_of_[static_cast<std::size_t>(v)] != -1)
        throw std::invalid_argument("vertex ids must be a permutation of 0..V-1");
      layer_of_[static_cast<std::size_t>(v)] = static_cast<int>(l);
    }
  }

  in_edges_.assign(total, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.tail < 0 || edge.head < 0 || static_cast<std::size_t>(edge.tail) >= total ||
        static_cast<std::size_t>(edge.head) >= total)
      throw std::invalid_argument("edge endpoint out of range");
    if (layer_of(edge.head) != layer_of(edge.tail) + 1)
      throw std::invalid_argument("edges must join consecutive layers");
    if (!(edge.cost > 0 && edge.cost < 1)) throw std::invalid_argument("edge costs must lie in (0, 1)");
    in_edges_[static_cast<std::size_t>(edge.head)].push_back(static_cast<int>(e));
  }
  for (std::size_t v = 0; v < total; ++v) {
    if (static_cast<int>(v) != root() && in_edges_[v].empty())
      throw std::invalid_argument("every non-root vertex needs an incoming edge");
    std::vector<int> tails;
    for (int e : in_edges_[v]) tails.push_back(edges_[static_cast<std::size_t>(e)].tail);
    std::sort(tails.begin(), tails.end());
    if (std::adjacent_find(tails.begin(), tails.end()) != tails.end())
      throw std::invalid_argument("duplicate edge");
  }

  steiner_slot_.assign(total, -1);
  for (std::size_t l = 1; l + 1 < layers_.size(); ++l) {
    for (int v : layers_[l]) {
      steiner_slot_[static_cast<std::size_t>(v)] = static_cast<int>(steiner_nodes_.size());
      steiner_nodes_.push_back(v);
    }
  }
}

int LayeredDag::find_edge(int tail, int head) const {
  if (head < 0 || head >= num_vertices()) return -1;
  for (int e : in_edges(head))
    if (edges_[static_cast<std::size_t>(e)].tail == tail) return e;
  return -1;
}

std::vector<double> LayeredDag::true_costs() const {
  std::vector<double> costs;
  costs.reserve(edges_.size());
  for (const auto& e : edges_) costs.push_back(e.cost);
  return costs;
}

bool operator==(const LayeredDag& a, const LayeredDag& b) {
  if (a.layers_ != b.layers_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto &x = a.edges_[i], &y = b.edges_[i];
    if (x.tail != y.tail || x.head != y.head || x.cost != y.cost) return false;
  }
  return true;
}

std::size_t SteinerConfig::count() const { return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), true)); }

void DstGenParams::validate() const {
  if (num_layers < 3) throw std::invalid_argument("num_layers must be at least 3");
  if (min_nodes_per_layer < 2 || min_nodes_per_layer > max_nodes_per_layer)
    throw std::invalid_argument("need 2 <= min_nodes_per_layer <= max_nodes_per_layer");
  if (!(extra_edge_probability >= 0 && extra_edge_probability <= 1))
    throw std::invalid_argument("extra_edge_probability must lie in [0, 1]");
}

DstInstance generate_dst(const DstGenParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);

  std::vector<std::vector<int>> layers{{0}};
  int next_id = 1;
  const auto span = static_cast<std::size_t>(params.max_nodes_per_layer - params.min_nodes_per_layer + 1);
  for (int l = 1; l < params.num_layers; ++l) {
    const int size = params.min_nodes_per_layer + static_cast<int>(rng.index(span));
    std::vector<int> layer(static_cast<std::size_t>(size));
    for (int& v : layer) v = next_id++;
    layers.push_back(std::move(layer));
  }

  auto draw_cost = [&rng] {
    double c = rng.uniform();
    while (c <= 0.0) c = rng.uniform();
    return c;
  };

  std::vector<Edge> edges;
  for (std::size_t l = 1; l < layers.size(); ++l) {
    const auto& prev = layers[l - 1];
    for (int head : layers[l]) {
      const int forced = prev[rng.index(prev.size())];
      for (int tail : prev) {
        if (tail == forced || rng.bernoulli(params.extra_edge_probability)) edges.push_back({tail, head, draw_cost()});
      }
    }
  }
  return {LayeredDag(std::move(layers), std::move(edges)), seed, params};
}

namespace {

/// Calls sink(edge_id) for the cheapest induced in-edge of every induced non-root
/// vertex; returns false as soon as one vertex has none.
template <class Sink>
bool scan_arborescence(const LayeredDag& dag, const SteinerConfig& config, std::span<const double> costs, Sink&& sink) {
  if (config.size() != static_cast<std::size_t>(dag.num_steiner()))
    throw std::invalid_argument("configuration size does not match instance");
  if (costs.size() != dag.edges().size()) throw std::invalid_argument("cost view size does not match edge count");

  const int root = dag.root();
  auto induced = [&](int v) {
    if (v == root) return true;
    const int slot = dag.steiner_slot(v);
    return slot < 0 || config.selected[static_cast<std::size_t>(slot)];
  };
  auto take_best = [&](int v) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int e : dag.in_edges(v)) {
      const auto& edge = dag.edges()[static_cast<std::size_t>(e)];
      if (!induced(edge.tail)) continue;
      if (best < 0 || costs[static_cast<std::size_t>(e)] < best_cost) {
        best = e;
        best_cost = costs[static_cast<std::size_t>(e)];
      }
    }
    if (best < 0) return false;
    sink(best);
    return true;
  };

  for (int v : dag.steiner_nodes())
    if (config.selected[static_cast<std::size_t>(dag.steiner_slot(v))] && !take_best(v)) return false;
  for (int v : dag.terminals())
    if (!take_best(v)) return false;
  return true;
}

}  // namespace

std::optional<Arborescence> min_arborescence(const LayeredDag& dag, const SteinerConfig& config,
                                             std::span<const double> costs) {
  Arborescence tree;
  const bool ok = scan_arborescence(dag, config, costs, [&](int e) {
    tree.edges.push_back(e);
    tree.total_cost += costs[static_cast<std::size_t>(e)];
  });
  if (!ok) return std::nullopt;
  return tree;
}

bool feasible(const LayeredDag& dag, const SteinerConfig& config) {
  const std::vector<double> zeros(dag.edges().size(), 0.0);
  return scan_arborescence(dag, config, zeros, [](int) {});
}

std::optional<double> dst_objective(const LayeredDag& dag, const SteinerConfig& config, std::span<const double> costs) {
  double total = 0;
  if (!scan_arborescence(dag, config, costs, [&](int e) { total += costs[static_cast<std::size_t>(e)]; }))
    return std::nullopt;
  return total;
}

SteinerConfig toggle_move(const SteinerConfig& config, const LayeredDag& dag, Rng& rng) {
  if (dag.num_steiner() < 1) throw std::invalid_argument("toggle_move: no potential Steiner nodes");
  SteinerConfig next = config;
  const std::size_t i = rng.index(next.size());
  next.selected[i] = !next.selected[i];
  return next;
}

DstOptimum brute_force_dst(const LayeredDag& dag) {
  const int s = dag.num_steiner();
  if (s > 20) throw std::invalid_argument("brute_force_dst: more than 20 potential Steiner nodes");
  const std::vector<double> costs = dag.true_costs();
  std::optional<DstOptimum> best;
  SteinerConfig config = SteinerConfig::none(dag);
  for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
    for (int i = 0; i < s; ++i) config.selected[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    if (auto c = dst_objective(dag, config, costs); c && (!best || *c < best->cost)) best = DstOptimum{config, *c};
  }
  if (!best) throw std::runtime_error("brute_force_dst: no feasible configuration");
  return *best;
}

DstLearningModel::DstLearningModel(const LayeredDag& dag, DecomposedEstimator& estimator, bool expose_truth)
    : dag_(&dag), estimator_(&estimator), true_costs_(dag.true_costs()), expose_truth_(expose_truth) {
  if (estimator.size() != static_cast<Index>(dag.edges().size()))
    throw std::invalid_argument("estimator must hold one component per edge");
}

std::optional<double> DstLearningModel::utility(const State& s) const {
  auto c = dst_objective(*dag_, s, estimator_->values());
  if (!c) return std::nullopt;
  return -*c;
}

std::optional<double> DstLearningModel::true_utility(const State& s) const {
  if (!expose_truth_) return std::nullopt;
  auto c = dst_objective(*dag_, s, true_costs_);
  if (!c) return std::nullopt;
  return -*c;
}

void DstLearningModel::observe(const State& s) {
  auto tree = min_arborescence(*dag_, s, estimator_->values());
  if (!tree) throw std::logic_error("observe: realized configuration is infeasible");
  for (int e : tree->edges) estimator_->update(e, true_costs_[static_cast<std::size_t>(e)]);
}

nlohmann::json to_json(const DstGenParams& params) {
  return {{"num_layers", params.num_layers},
          {"max_nodes_per_layer", params.max_nodes_per_layer},
          {"min_nodes_per_layer", params.min_nodes_per_layer},
          {"extra_edge_probability", params.extra_edge_probability}};
}

DstGenParams dst_params_from_json(const nlohmann::json& j) {
  DstGenParams p;
  p.num_layers = j.at("num_layers").get<int>();
  p.max_nodes_per_layer = j.at("max_nodes_per_layer").get<int>();
  p.min_nodes_per_layer = j.at("min_nodes_per_layer").get<int>();
  p.extra_edge_probability = j.at("extra_edge_probability").get<double>();
  p.validate();
  return p;
}

nlohmann::json to_json(const DstInstance& instance) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : instance.dag.edges()) edges.push_back({{"tail", e.tail}, {"head", e.head}, {"cost", e.cost}});
  return {{"schema_version", 1},
          {"problem", "dst"},
          {"layers", instance.dag.layers()},
          {"edges", std::move(edges)},
          {"seed", instance.seed},
          {"params", to_json(instance.params)}};
}

DstInstance dst_instance_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != 1) throw std::invalid_argument("unsupported DST instance schema_version");
  if (j.contains("problem") && j.at("problem").get<std::string>() != "dst")
    throw std::invalid_argument("not a DST instance");
  auto layers = j.at("layers").get<std::vector<std::vector<int>>>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("tail").get<int>(), e.at("head").get<int>(), e.at("cost").get<double>()});
  return {LayeredDag(std::move(layers), std::move(edges)), j.at("seed").get<std::uint64_t>(),
          dst_params_from_json(j.at("params"))};
}

}  // namespace ergodic::steiner
