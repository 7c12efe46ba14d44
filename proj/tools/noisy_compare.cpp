// noisy-compare: command-line front end for the selection, neighbour,
// clustering and benchmarking routines.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "noisy/dataset_io.hpp"
#include "noisy/harness.hpp"
#include "noisy/report.hpp"
#include "noisy/sweep.hpp"

namespace {

using namespace noisy;

struct CommonOptions {
  std::string input;
  std::string format = "points-csv";
  std::string noise = "none";
  double mu = 0.0;
  double p = 0.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::string adversary = "pessimistic";
  std::string algorithm = "robust";
  std::string out;
  std::string csv;
  bool interactive = false;
};

struct TaskOptions {
  std::string preset = "theory";
  ItemId query = 0;
  std::size_t k = 2;
  std::size_t m = 0;
  std::string gamma_preset = "experiment";
  std::optional<ItemId> first_center;
  std::size_t core_size = 0;
  std::string linkage = "single";
  bool partition_from_labels = false;
};

void add_common(CLI::App* cmd, CommonOptions& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--input", c.input, "Dataset path")->required();
  cmd->add_option("--format", c.format, "Dataset format")
      ->check(CLI::IsMember({"points-csv", "matrix", "values-csv"}))
      ->capture_default_str();
  cmd->add_option("--noise", c.noise, "Simulated noise model")
      ->check(CLI::IsMember({"none", "adversarial", "probabilistic"}))
      ->capture_default_str();
  cmd->add_option("--mu", c.mu, "Adversarial band width")->capture_default_str();
  cmd->add_option("--p", c.p, "Probabilistic flip rate")->capture_default_str();
  cmd->add_option("--delta", c.delta, "Failure probability")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for oracle noise and algorithm randomness")->capture_default_str();
  cmd->add_option("--adversary", c.adversary, "Adversary strategy inside the band")
      ->check(CLI::IsMember({"pessimistic", "random-in-band"}))
      ->capture_default_str();
  cmd->add_option("--algorithm", c.algorithm, "robust, or a baseline")
      ->check(CLI::IsMember({"robust", "tour2", "samp", "tdist"}))
      ->capture_default_str();
  cmd->add_flag("--interactive", c.interactive, "Ask a human: prompts on stderr, y/n replies on stdin");
  cmd->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--csv", c.csv, "Also write a one-row CSV report");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot open '" + path + "' for writing");
  f << text;
  require(static_cast<bool>(f), "failed writing '" + path + "'");
}

int run_task(Task task, const CommonOptions& c, const TaskOptions& t) {
  const auto g = std::make_shared<const GroundTruth>(load_dataset(c.input, parse_format(c.format)));

  TaskConfig cfg;
  cfg.task = task;
  cfg.delta = c.delta;
  cfg.experiment_preset = t.preset == "experiment";
  cfg.query = t.query;
  cfg.k = t.k;
  cfg.m = t.m;
  cfg.theory_gamma = t.gamma_preset == "theory";
  cfg.first_center = t.first_center;
  cfg.core_size = t.core_size;
  cfg.linkage = parse_linkage(t.linkage);
  cfg.partition_from_labels = t.partition_from_labels;
  require(cfg.delta > 0.0 && cfg.delta < 1.0, "--delta must lie in (0,1)");

  NoiseParams np;
  np.kind = parse_noise_kind(c.noise);
  np.mu = c.mu;
  np.p = c.p;
  np.delta = c.delta;
  np.seed = c.seed;
  np.adversary = parse_adversary(c.adversary);
  np.validate();
  if (np.kind == NoiseKind::Probabilistic && np.p > kMaxSupportedFlipRate)
    std::cerr << "warning: flip rate " << np.p << " exceeds " << kMaxSupportedFlipRate
              << "; the robust routines carry no guarantee there\n";

  const Algorithm alg = parse_algorithm(c.algorithm);
  TrialReport r;
  if (c.interactive) {
    Oracle o = Oracle::interactive(std::cin, std::cerr);
    r = run_with_oracle(*g, cfg, alg, o, c.seed);
  } else {
    r = run_trial(g, cfg, alg, np, c.seed);
  }

  json out{{"command", to_string(task)},
           {"algorithm", r.algorithm},
           {"input", c.input},
           {"n", g->size()},
           {"noise", noise_json(r.noise)},
           {"interactive", c.interactive},
           {"seed", c.seed}};
  for (auto& [key, value] : r.output.items()) out[key] = value;
  out["warnings"] = r.warnings;
  out["wall_time"] = r.wall_time;
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';

  const std::string text = out.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
  }
  if (!c.csv.empty()) {
    std::ostringstream csv;
    write_csv_header(csv);
    write_csv_row(csv, r);
    write_text(c.csv, csv.str());
  }
  return 0;
}

int run_bench(const std::string& config_path, const std::string& out_path, const std::string& csv_path,
              std::size_t threads) {
  std::ifstream f(config_path);
  require(static_cast<bool>(f), "cannot open config '" + config_path + "'");
  json config;
  try {
    config = json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  const auto res = sweep(config, threads ? threads : trial_threads());
  const std::string text = res.to_json().dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
  if (!csv_path.empty()) {
    std::ostringstream csv;
    res.write_csv(csv);
    write_text(csv_path, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selection and clustering through a noisy comparison oracle"};
  app.require_subcommand(1);

  struct Sub {
    Task task;
    CLI::App* cmd;
    CommonOptions common;
    TaskOptions opts;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  const auto add = [&](Task task, const std::string& name, const std::string& help, const std::string& fmt) {
    auto s = std::make_unique<Sub>();
    s->task = task;
    s->cmd = app.add_subcommand(name, help);
    add_common(s->cmd, s->common, fmt);
    subs.push_back(std::move(s));
    return subs.back().get();
  };

  auto* mx = add(Task::Max, "max", "Maximum value", "values-csv");
  auto* far = add(Task::Farthest, "farthest", "Farthest point from a query", "points-csv");
  auto* nn = add(Task::Nearest, "nn", "Nearest point to a query", "points-csv");
  auto* kc = add(Task::KCenter, "kcenter", "Greedy k-center clustering", "points-csv");
  auto* hc = add(Task::HCluster, "hcluster", "Agglomerative hierarchical clustering", "points-csv");

  for (Sub* s : {mx, far, nn})
    s->cmd->add_option("--preset", s->opts.preset, "Selection constants")
        ->check(CLI::IsMember({"theory", "experiment"}))
        ->capture_default_str();
  for (Sub* s : {far, nn}) s->cmd->add_option("--query", s->opts.query, "Query point id")->capture_default_str();
  kc->cmd->add_option("--k", kc->opts.k, "Number of centers")->required();
  kc->cmd->add_option("--m", kc->opts.m, "Smallest optimal cluster size (0: n/(5k))")->capture_default_str();
  kc->cmd->add_option("--gamma-preset", kc->opts.gamma_preset, "Sampling constant preset")
      ->check(CLI::IsMember({"theory", "experiment"}))
      ->capture_default_str();
  kc->cmd->add_option("--first-center", kc->opts.first_center, "First center id (default: random)");
  kc->cmd->add_option("--core-size", kc->opts.core_size, "Core size override (0: default)")->capture_default_str();
  hc->cmd->add_option("--linkage", hc->opts.linkage, "Linkage")
      ->check(CLI::IsMember({"single", "complete"}))
      ->capture_default_str();
  hc->cmd->add_flag("--partition-from-labels", hc->opts.partition_from_labels,
                    "Use dataset labels as the pre-partition required under probabilistic noise");

  std::string config, bench_out, bench_csv;
  std::size_t threads = 0;
  auto* bench = app.add_subcommand("bench", "Run a sweep from a JSON config");
  bench->add_option("--config", config, "Sweep config (JSON)")->required();
  bench->add_option("--out", bench_out, "Write the JSON report here instead of stdout");
  bench->add_option("--csv", bench_csv, "Also write per-trial CSV");
  bench->add_option("--threads", threads, "Worker threads (0: NOISY_COMPARE_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (bench->parsed()) return run_bench(config, bench_out, bench_csv, threads);
    for (const auto& s : subs)
      if (s->cmd->parsed()) return run_task(s->task, s->common, s->opts);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const OracleAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
