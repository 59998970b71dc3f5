#include "ergodic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace ergodic::bench {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::dst: return "dst";
    case Problem::tsp: return "tsp";
    case Problem::abstract: return "abstract";
  }
  return "?";
}

std::string to_string(EstimatorKind k) { return k == EstimatorKind::tabular ? "tabular" : "decomposed"; }

EstimatorKind ExperimentConfig::estimator_kind() const {
  if (estimator) return *estimator;
  return problem == Problem::abstract ? EstimatorKind::tabular : EstimatorKind::decomposed;
}

void ExperimentConfig::validate() const {
  try {
    if (instance_count < 1) throw ConfigError("instance_count must be positive");
    if (!(beta0 > 0) || !(rho > 0) || loop_length_factor < 1)
      throw ConfigError("schedule needs beta0 > 0, rho > 0, loop_length_factor >= 1");
    stop.validate();
    dst.validate();
    if (!(dst_prior > 0)) throw ConfigError("dst.prior must be positive");
    if (tsp_min_cities < 4 || tsp_min_cities > tsp_max_cities) throw ConfigError("need 4 <= tsp.min_cities <= tsp.max_cities");
    tsp_noise.validate();
    if (!(tsp_prior > 0)) throw ConfigError("tsp.prior must be positive");
    if (abstract_actions < 2) throw ConfigError("abstract.num_actions must be at least 2");
    if (!(abstract_noise_half_width >= 0 && abstract_noise_half_width < 1))
      throw ConfigError("abstract.noise_half_width must lie in [0, 1)");
    if (threads < 1) throw ConfigError("threads must be positive");
    const bool tabular = estimator_kind() == EstimatorKind::tabular;
    if (tabular != (problem == Problem::abstract))
      throw ConfigError("estimator must be tabular for abstract problems and decomposed for dst/tsp");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    Int v;
    if constexpr (std::is_unsigned_v<Int>) {
      if (value.front() == '-') throw std::invalid_argument(value);
      v = static_cast<Int>(std::stoull(value, &used));
    } else {
      v = static_cast<Int>(std::stoll(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer for " + key + ": " + value);
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + key + ": " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("expected true/false for " + key + ": " + value);
}

std::string format_double(double v) { return nlohmann::json(v).dump(); }

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"schema_version",
       [](ExperimentConfig&, const std::string& k, const std::string& v) {
         if (parse_int<int>(k, v) != 1) throw ConfigError("unsupported config schema_version " + v);
       }},
      {"problem",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "dst") c.problem = Problem::dst;
         else if (v == "tsp") c.problem = Problem::tsp;
         else if (v == "abstract") c.problem = Problem::abstract;
         else throw ConfigError("unknown problem: " + v);
       }},
      {"instance_count", [](auto& c, auto& k, auto& v) { c.instance_count = parse_int<int>(k, v); }},
      {"master_seed", [](auto& c, auto& k, auto& v) { c.master_seed = parse_int<std::uint64_t>(k, v); }},
      {"beta0", [](auto& c, auto& k, auto& v) { c.beta0 = parse_double(k, v); }},
      {"rho", [](auto& c, auto& k, auto& v) { c.rho = parse_double(k, v); }},
      {"loop_length_factor", [](auto& c, auto& k, auto& v) { c.loop_length_factor = parse_int<std::int64_t>(k, v); }},
      {"max_iterations", [](auto& c, auto& k, auto& v) { c.stop.max_iterations = parse_int<std::int64_t>(k, v); }},
      {"freeze_window", [](auto& c, auto& k, auto& v) { c.stop.freeze_window = parse_int<std::int64_t>(k, v); }},
      {"dst.num_layers", [](auto& c, auto& k, auto& v) { c.dst.num_layers = parse_int<int>(k, v); }},
      {"dst.max_nodes_per_layer", [](auto& c, auto& k, auto& v) { c.dst.max_nodes_per_layer = parse_int<int>(k, v); }},
      {"dst.min_nodes_per_layer", [](auto& c, auto& k, auto& v) { c.dst.min_nodes_per_layer = parse_int<int>(k, v); }},
      {"dst.extra_edge_probability",
       [](auto& c, auto& k, auto& v) { c.dst.extra_edge_probability = parse_double(k, v); }},
      {"dst.prior", [](auto& c, auto& k, auto& v) { c.dst_prior = parse_double(k, v); }},
      {"tsp.min_cities", [](auto& c, auto& k, auto& v) { c.tsp_min_cities = parse_int<int>(k, v); }},
      {"tsp.max_cities", [](auto& c, auto& k, auto& v) { c.tsp_max_cities = parse_int<int>(k, v); }},
      {"tsp.noise_half_width", [](auto& c, auto& k, auto& v) { c.tsp_noise.half_width = parse_double(k, v); }},
      {"tsp.prior", [](auto& c, auto& k, auto& v) { c.tsp_prior = parse_double(k, v); }},
      {"abstract.num_actions", [](auto& c, auto& k, auto& v) { c.abstract_actions = parse_int<int>(k, v); }},
      {"abstract.noise_half_width",
       [](auto& c, auto& k, auto& v) { c.abstract_noise_half_width = parse_double(k, v); }},
      {"abstract.prior", [](auto& c, auto& k, auto& v) { c.abstract_prior = parse_double(k, v); }},
      {"estimator",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "tabular") c.estimator = EstimatorKind::tabular;
         else if (v == "decomposed") c.estimator = EstimatorKind::decomposed;
         else throw ConfigError("unknown estimator: " + v);
       }},
      {"share_chain_seed", [](auto& c, auto& k, auto& v) { c.share_chain_seed = parse_bool(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = parse_int<int>(k, v); }},
      {"record_wall_time", [](auto& c, auto& k, auto& v) { c.record_wall_time = parse_bool(k, v); }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for " + key);
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::map<std::string, std::string> config_entries(const ExperimentConfig& c) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {
      {"schema_version", "1"},
      {"problem", to_string(c.problem)},
      {"instance_count", std::to_string(c.instance_count)},
      {"master_seed", std::to_string(c.master_seed)},
      {"beta0", format_double(c.beta0)},
      {"rho", format_double(c.rho)},
      {"loop_length_factor", std::to_string(c.loop_length_factor)},
      {"max_iterations", std::to_string(c.stop.max_iterations)},
      {"freeze_window", std::to_string(c.stop.freeze_window)},
      {"dst.num_layers", std::to_string(c.dst.num_layers)},
      {"dst.max_nodes_per_layer", std::to_string(c.dst.max_nodes_per_layer)},
      {"dst.min_nodes_per_layer", std::to_string(c.dst.min_nodes_per_layer)},
      {"dst.extra_edge_probability", format_double(c.dst.extra_edge_probability)},
      {"dst.prior", format_double(c.dst_prior)},
      {"tsp.min_cities", std::to_string(c.tsp_min_cities)},
      {"tsp.max_cities", std::to_string(c.tsp_max_cities)},
      {"tsp.noise_half_width", format_double(c.tsp_noise.half_width)},
      {"tsp.prior", format_double(c.tsp_prior)},
      {"abstract.num_actions", std::to_string(c.abstract_actions)},
      {"abstract.noise_half_width", format_double(c.abstract_noise_half_width)},
      {"abstract.prior", format_double(c.abstract_prior)},
      {"estimator", to_string(c.estimator_kind())},
      {"share_chain_seed", b(c.share_chain_seed)},
      {"threads", std::to_string(c.threads)},
      {"record_wall_time", b(c.record_wall_time)},
  };
}

std::uint64_t instance_seed(std::uint64_t master_seed, int instance_id) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(instance_id));
}

double deviation(double cost_a, double cost_b) {
  if (!(cost_a > 0) || !(cost_b > 0) || !std::isfinite(cost_a) || !std::isfinite(cost_b))
    throw std::domain_error("deviation: costs must be positive and finite");
  return std::abs(cost_a - cost_b) / std::min(cost_a, cost_b);
}

namespace {

enum Stream : std::uint64_t { kGenerate = 0, kSaChain = 1, kEaChain = 2, kSize = 3 };

struct Outcome {
  nlohmann::json configuration;
  double true_cost = 0;
  double estimated_cost = 0;
  std::int64_t iterations = 0;
  bool froze = false;
  std::int64_t unobserved = 0;
  bool unobserved_at_prior = true;
  double wall_seconds = 0;
};

AnnealingSchedule schedule_for(const ExperimentConfig& c, int size) {
  return AnnealingSchedule::geometric(c.beta0, c.rho, c.loop_length_factor * std::max(size, 1));
}

bool unobserved_keep_prior(const TabularEstimator& table) {
  for (Index i = 0; i < table.size(); ++i)
    if (table.count(i) == 0 && table.estimate(i) != table.prior(i)) return false;
  return true;
}

nlohmann::json selected_nodes(const steiner::LayeredDag& dag, const steiner::SteinerConfig& config) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < dag.num_steiner(); ++i)
    if (config.selected[static_cast<std::size_t>(i)]) out.push_back(dag.steiner_nodes()[static_cast<std::size_t>(i)]);
  return out;
}

Outcome solve_dst(const steiner::LayeredDag& dag, const ExperimentConfig& c, std::uint64_t seed, bool learned) {
  const auto schedule = schedule_for(c, dag.num_steiner());
  const std::vector<double> truth = dag.true_costs();
  Outcome out;
  if (!learned) {
    steiner::DstModel model(dag);
    auto r = simulated_annealing(model, steiner::SteinerConfig::all(dag), schedule, c.stop, seed);
    out.configuration = selected_nodes(dag, r.final_state);
    out.true_cost = -r.final_value;
    out.estimated_cost = out.true_cost;
    out.iterations = r.iterations_used;
    out.froze = r.froze;
    return out;
  }
  DecomposedEstimator estimator(static_cast<Index>(dag.edges().size()), c.dst_prior);
  steiner::DstLearningModel model(dag, estimator);
  auto r = ergodic_annealing(model, steiner::SteinerConfig::all(dag), schedule, c.stop, seed);
  out.configuration = selected_nodes(dag, r.anneal.final_state);
  out.true_cost = *steiner::dst_objective(dag, r.anneal.final_state, truth);
  out.estimated_cost = -r.final_estimated_value;
  out.iterations = r.anneal.iterations_used;
  out.froze = r.anneal.froze;
  out.unobserved = estimator.unobserved_count();
  out.unobserved_at_prior = unobserved_keep_prior(estimator.components());
  return out;
}

Outcome solve_tsp(const tsp::TspInstance& inst, const ExperimentConfig& c, std::uint64_t seed, bool learned) {
  const auto schedule = schedule_for(c, inst.size());
  tsp::Tour start(static_cast<std::size_t>(inst.size()));
  for (int i = 0; i < inst.size(); ++i) start[static_cast<std::size_t>(i)] = i;
  Outcome out;
  if (!learned) {
    tsp::TspModel model(inst);
    auto r = simulated_annealing(model, start, schedule, c.stop, seed);
    out.configuration = tsp::canonical_tour(r.final_state);
    out.true_cost = -r.final_value;
    out.estimated_cost = out.true_cost;
    out.iterations = r.iterations_used;
    out.froze = r.froze;
    return out;
  }
  DecomposedEstimator estimator(static_cast<Index>(inst.num_legs()), c.tsp_prior);
  tsp::TspLearningModel model(inst, estimator, c.tsp_noise, Rng::stream(seed, 1));
  auto r = ergodic_annealing(model, start, schedule, c.stop, seed);
  out.configuration = tsp::canonical_tour(r.anneal.final_state);
  out.true_cost = tsp::tour_cost(inst, r.anneal.final_state, inst.mean_times());
  out.estimated_cost = -r.final_estimated_value;
  out.iterations = r.anneal.iterations_used;
  out.froze = r.anneal.froze;
  out.unobserved = estimator.unobserved_count();
  out.unobserved_at_prior = unobserved_keep_prior(estimator.components());
  return out;
}

Outcome solve_abstract(const Vector<double>& costs, const ExperimentConfig& c, std::uint64_t seed, bool learned) {
  const Index n = costs.size();
  const auto space = FiniteActionSpace::indexed(n);
  const auto kernel = ProposalKernel<double>::uniform(n);
  const auto schedule = schedule_for(c, static_cast<int>(n));
  const Vector<double> u = -costs;
  Outcome out;
  if (!learned) {
    auto r = simulated_annealing(space, u, kernel, schedule, c.stop, seed);
    out.configuration = r.final_state;
    out.true_cost = costs(r.final_state);
    out.estimated_cost = out.true_cost;
    out.iterations = r.iterations_used;
    out.froze = r.froze;
    return out;
  }
  const auto env = PayoffEnvironment::multiplicative_uniform(u, c.abstract_noise_half_width);
  auto r = ergodic_annealing(env, TabularEstimator(n, -c.abstract_prior), kernel, schedule, c.stop, seed);
  out.configuration = r.result.anneal.final_state;
  out.true_cost = costs(r.result.anneal.final_state);
  out.estimated_cost = -r.result.final_estimated_value;
  out.iterations = r.result.anneal.iterations_used;
  out.froze = r.result.anneal.froze;
  out.unobserved = r.estimator.unobserved_count();
  out.unobserved_at_prior = unobserved_keep_prior(r.estimator);
  return out;
}

Vector<double> generate_abstract_costs(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vector<double> costs(n);
  for (Index a = 0; a < n; ++a) {
    double v = rng.uniform();
    while (v <= 0.0) v = rng.uniform();
    costs(a) = v;
  }
  return costs;
}

int tsp_size_for(const ExperimentConfig& c, std::uint64_t seed_i) {
  Rng rng(derive_seed(seed_i, kSize));
  return c.tsp_min_cities + static_cast<int>(rng.index(static_cast<std::size_t>(c.tsp_max_cities - c.tsp_min_cities + 1)));
}

template <class F>
Outcome timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = f();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

nlohmann::json generate_instance_json(const ExperimentConfig& config, int instance_id) {
  const std::uint64_t seed_i = instance_seed(config.master_seed, instance_id);
  const std::uint64_t gen_seed = derive_seed(seed_i, kGenerate);
  switch (config.problem) {
    case Problem::dst: return steiner::to_json(steiner::generate_dst(config.dst, gen_seed));
    case Problem::tsp: return tsp::to_json(tsp::generate_tsp(tsp_size_for(config, seed_i), gen_seed));
    case Problem::abstract: {
      const Vector<double> costs = generate_abstract_costs(config.abstract_actions, gen_seed);
      return {{"schema_version", 1},
              {"problem", "abstract"},
              {"costs", std::vector<double>(costs.data(), costs.data() + costs.size())},
              {"seed", gen_seed}};
    }
  }
  throw std::logic_error("unknown problem");
}

InstanceRecord run_instance(const ExperimentConfig& config, int instance_id) {
  const std::uint64_t seed_i = instance_seed(config.master_seed, instance_id);
  const std::uint64_t gen_seed = derive_seed(seed_i, kGenerate);
  const std::uint64_t sa_seed = derive_seed(seed_i, kSaChain);
  const std::uint64_t ea_seed = config.share_chain_seed ? sa_seed : derive_seed(seed_i, kEaChain);

  InstanceRecord rec;
  rec.instance_id = instance_id;
  Outcome sa, ea;
  switch (config.problem) {
    case Problem::dst: {
      const auto inst = steiner::generate_dst(config.dst, gen_seed);
      rec.size = inst.dag.num_steiner();
      sa = timed([&] { return solve_dst(inst.dag, config, sa_seed, false); });
      ea = timed([&] { return solve_dst(inst.dag, config, ea_seed, true); });
      break;
    }
    case Problem::tsp: {
      const auto inst = tsp::generate_tsp(tsp_size_for(config, seed_i), gen_seed);
      rec.size = inst.size();
      sa = timed([&] { return solve_tsp(inst, config, sa_seed, false); });
      ea = timed([&] { return solve_tsp(inst, config, ea_seed, true); });
      break;
    }
    case Problem::abstract: {
      const Vector<double> costs = generate_abstract_costs(config.abstract_actions, gen_seed);
      rec.size = config.abstract_actions;
      sa = timed([&] { return solve_abstract(costs, config, sa_seed, false); });
      ea = timed([&] { return solve_abstract(costs, config, ea_seed, true); });
      break;
    }
  }

  rec.sa_cost = sa.true_cost;
  rec.ea_cost = ea.true_cost;
  rec.ea_estimated_cost = ea.estimated_cost;
  rec.agree = sa.configuration == ea.configuration;
  rec.deviation = rec.agree ? 0.0 : deviation(sa.true_cost, ea.true_cost);
  rec.sa_iters = sa.iterations;
  rec.ea_iters = ea.iterations;
  rec.sa_froze = sa.froze;
  rec.ea_froze = ea.froze;
  rec.ea_unobserved_components = ea.unobserved;
  rec.ea_unobserved_at_prior = ea.unobserved_at_prior;
  if (config.record_wall_time) {
    rec.sa_wall_seconds = sa.wall_seconds;
    rec.ea_wall_seconds = ea.wall_seconds;
  }
  return rec;
}

Aggregates aggregate(const std::vector<InstanceRecord>& records) {
  Aggregates agg;
  agg.instance_count = static_cast<int>(records.size());
  double dev_sum = 0, size_sum = 0;
  int ok = 0;
  for (const auto& r : records) {
    if (r.error) {
      ++agg.failed_count;
      continue;
    }
    ++ok;
    agg.agreement_count += r.agree;
    agg.ea_not_worse_count += r.ea_cost <= r.sa_cost;
    dev_sum += r.deviation;
    size_sum += r.size;
  }
  if (ok > 0) {
    agg.mean_deviation = dev_sum / ok;
    agg.mean_size = size_sum / ok;
  }
  return agg;
}

RunReport run_benchmark(const ExperimentConfig& config) {
  config.validate();
  RunReport report{config, std::vector<InstanceRecord>(static_cast<std::size_t>(config.instance_count)), {}};

  auto run_one = [&](int i) {
    try {
      report.records[static_cast<std::size_t>(i)] = run_instance(config, i);
    } catch (const std::exception& e) {
      InstanceRecord failed;
      failed.instance_id = i;
      failed.error = e.what();
      report.records[static_cast<std::size_t>(i)] = std::move(failed);
    }
  };

  const int workers = std::min(config.threads, config.instance_count);
  if (workers <= 1) {
    for (int i = 0; i < config.instance_count; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < config.instance_count; i = next++) run_one(i);
      });
  }
  report.aggregates = aggregate(report.records);
  return report;
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    nlohmann::json j{{"instance_id", r.instance_id}};
    if (r.error) {
      j["error"] = *r.error;
      records.push_back(std::move(j));
      continue;
    }
    j["size"] = r.size;
    j["sa_cost"] = r.sa_cost;
    j["ea_cost"] = r.ea_cost;
    j["ea_estimated_cost"] = r.ea_estimated_cost;
    j["agree"] = r.agree;
    j["deviation"] = r.deviation;
    j["sa_iters"] = r.sa_iters;
    j["ea_iters"] = r.ea_iters;
    j["sa_froze"] = r.sa_froze;
    j["ea_froze"] = r.ea_froze;
    j["ea_unobserved_components"] = r.ea_unobserved_components;
    j["ea_unobserved_at_prior"] = r.ea_unobserved_at_prior;
    if (r.sa_wall_seconds) j["sa_wall_seconds"] = *r.sa_wall_seconds;
    if (r.ea_wall_seconds) j["ea_wall_seconds"] = *r.ea_wall_seconds;
    records.push_back(std::move(j));
  }
  const auto& a = report.aggregates;
  return {{"schema_version", 1},
          {"config", config_entries(report.config)},
          {"aggregates",
           {{"instance_count", a.instance_count},
            {"failed_count", a.failed_count},
            {"agreement_count", a.agreement_count},
            {"ea_not_worse_count", a.ea_not_worse_count},
            {"mean_deviation", a.mean_deviation},
            {"mean_size", a.mean_size}}},
          {"records", std::move(records)}};
}

std::string to_json_text(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

std::string to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "# schema_version=1\n" << kCsvHeader << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : report.records) {
    if (r.error) {
      out << r.instance_id << ",,,,,,,\n";
      continue;
    }
    out << r.instance_id << ',' << r.size << ',' << num(r.sa_cost) << ',' << num(r.ea_cost) << ','
        << (r.agree ? "true" : "false") << ',' << num(r.deviation) << ',' << r.sa_iters << ',' << r.ea_iters << '\n';
  }
  return out.str();
}

nlohmann::json solve_instance_json(const nlohmann::json& instance, const ExperimentConfig& config, std::uint64_t seed,
                                   bool learned) {
  const std::string problem = instance.at("problem").get<std::string>();
  Outcome out;
  int size = 0;
  if (problem == "dst") {
    const auto inst = steiner::dst_instance_from_json(instance);
    size = inst.dag.num_steiner();
    out = solve_dst(inst.dag, config, seed, learned);
  } else if (problem == "tsp") {
    const auto inst = tsp::tsp_instance_from_json(instance);
    size = inst.size();
    out = solve_tsp(inst, config, seed, learned);
  } else if (problem == "abstract") {
    const auto costs = instance.at("costs").get<std::vector<double>>();
    if (costs.size() < 2) throw std::invalid_argument("abstract instance needs at least two actions");
    for (double v : costs)
      if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("abstract costs must be positive");
    size = static_cast<int>(costs.size());
    out = solve_abstract(Eigen::Map<const Vector<double>>(costs.data(), size), config, seed, learned);
  } else {
    throw std::invalid_argument("unknown instance problem: " + problem);
  }
  nlohmann::json j{{"schema_version", 1},
                   {"problem", problem},
                   {"algorithm", learned ? "ergodic_annealing" : "simulated_annealing"},
                   {"seed", seed},
                   {"size", size},
                   {"configuration", out.configuration},
                   {"true_cost", out.true_cost},
                   {"iterations", out.iterations},
                   {"froze", out.froze}};
  if (learned) {
    j["estimated_cost"] = out.estimated_cost;
    j["unobserved_components"] = out.unobserved;
  }
  return j;
}

}  // namespace ergodic::bench
