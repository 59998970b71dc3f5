#include "ergodic/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ergodic/bench.hpp"
#include "ergodic/macau.hpp"

namespace ergodic {
namespace {

namespace fs = std::filesystem;
using bench::ConfigError;

/// Failures that are the user's fault (bad flags, missing files) rather than runtime faults.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

bench::ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? bench::ExperimentConfig{} : bench::load_config(path);
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::string problem;
  int count = 1;
  std::string instance;
  int threads = 0;
  double beta = 1.0;
  std::int64_t steps = 500'000;
  std::int64_t asymptotic_steps = 20'000;
  std::int64_t replicas = 2000;
  int actions = 6;
  double noise = 0.25;
  double prior = 0.5;
};

int run_gen(const Options& o) {
  auto config = config_from(o.config);
  if (!o.problem.empty()) {
    if (o.problem == "dst") config.problem = bench::Problem::dst;
    else if (o.problem == "tsp") config.problem = bench::Problem::tsp;
    else if (o.problem == "abstract") config.problem = bench::Problem::abstract;
    else throw ConfigError("unknown problem: " + o.problem);
    config.estimator.reset();
  }
  if (o.seed) config.master_seed = *o.seed;
  if (o.count < 1) throw ConfigError("--count must be positive");
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  for (int i = 0; i < o.count; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04d.json", bench::to_string(config.problem).c_str(), i);
    const fs::path file = dir / name;
    write_text(file.string(), bench::generate_instance_json(config, i).dump(2) + "\n");
    std::cout << file.string() << '\n';
  }
  return 0;
}

int run_solve(const Options& o, bool learned) {
  if (o.instance.empty()) throw UsageError("--instance is required");
  const auto config = config_from(o.config);
  const auto instance = read_json(o.instance);
  const auto result = bench::solve_instance_json(instance, config, o.seed.value_or(0), learned);
  write_text(o.out, result.dump(2) + "\n");
  return 0;
}

int run_bench(const Options& o) {
  auto config = config_from(o.config);
  if (o.seed) config.master_seed = *o.seed;
  if (o.threads > 0) config.threads = o.threads;
  config.validate();
  const auto report = bench::run_benchmark(config);
  if (o.format == "csv") {
    write_text(o.out, bench::to_csv(report));
    return 0;
  }
  write_text(o.out, bench::to_json_text(report));
  if (!o.out.empty() && o.out != "-") {
    fs::path csv = o.out;
    csv.replace_extension(".csv");
    if (csv != fs::path(o.out)) write_text(csv.string(), bench::to_csv(report));
  }
  return 0;
}

int run_conjecture(const Options& o) {
  if (o.actions < 2) throw ConfigError("--actions must be at least 2");
  if (!(o.beta > 0)) throw ConfigError("--beta must be positive");
  if (o.steps < 1 || o.asymptotic_steps < 1 || o.replicas < 1)
    throw ConfigError("--steps, --asymptotic-steps and --replicas must be positive");
  if (!(o.noise >= 0 && o.noise < 1)) throw ConfigError("--noise must lie in [0, 1)");
  ConjectureConfig cfg;
  cfg.beta = o.beta;
  cfg.steps = o.steps;
  cfg.asymptotic_steps = o.asymptotic_steps;
  cfg.replicas = o.replicas;
  cfg.prior = o.prior;
  cfg.seed = o.seed.value_or(0);

  Rng means_rng = Rng::stream(cfg.seed, 0);
  Vector<double> means(o.actions);
  for (Index a = 0; a < means.size(); ++a) means(a) = means_rng.uniform();
  const auto env = PayoffEnvironment::multiplicative_uniform(means, o.noise);

  auto j = to_json(conjecture_report(env, cfg));
  j["actions"] = o.actions;
  j["noise_half_width"] = o.noise;
  j["true_means"] = std::vector<double>(means.data(), means.data() + means.size());
  write_text(o.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Simulated Annealing and Ergodic Annealing toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Flat key = value experiment config");
    sub->add_option("--seed", o.seed, "Seed (master seed for gen/bench, chain seed otherwise)");
    sub->add_option("--out", o.out, "Output path");
  };

  auto* gen = app.add_subcommand("gen", "Emit generated instance files");
  add_common(gen);
  gen->add_option("--problem", o.problem, "dst | tsp | abstract");
  gen->add_option("--count", o.count, "Number of instances");

  auto* anneal = app.add_subcommand("anneal", "Simulated Annealing on one instance (known costs)");
  add_common(anneal);
  anneal->add_option("--instance", o.instance, "Instance JSON file")->required();

  auto* ergodic = app.add_subcommand("ergodic", "Ergodic Annealing on one instance (learned costs)");
  add_common(ergodic);
  ergodic->add_option("--instance", o.instance, "Instance JSON file")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Full SA vs EA sweep");
  add_common(bench_cmd);
  bench_cmd->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  bench_cmd->add_option("--threads", o.threads, "Worker threads");

  auto* conj = app.add_subcommand("conjecture", "Empirical ergodic/asymptotic checks of the Macau chain");
  add_common(conj);
  conj->add_option("--beta", o.beta, "Inverse temperature");
  conj->add_option("--steps", o.steps, "Length of the long run");
  conj->add_option("--asymptotic-steps", o.asymptotic_steps, "Replica horizon n");
  conj->add_option("--replicas", o.replicas, "Number of replicas");
  conj->add_option("--actions", o.actions, "Number of actions");
  conj->add_option("--noise", o.noise, "Multiplicative uniform noise half-width");
  conj->add_option("--prior", o.prior, "Prior estimate u_0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*gen) return run_gen(o);
    if (*anneal) return run_solve(o, false);
    if (*ergodic) return run_solve(o, true);
    if (*bench_cmd) return run_bench(o);
    if (*conj) return run_conjecture(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return 2;
  }
  std::cerr << app.help();
  return 1;
}

}  // namespace ergodic
