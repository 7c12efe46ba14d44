#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "noisy/dataset_io.hpp"
#include "noisy/generators.hpp"
#include "noisy/harness.hpp"
#include "noisy/report.hpp"

namespace noisy {

/// Worker count: hardware concurrency, capped by NOISY_COMPARE_THREADS.
inline std::size_t trial_threads() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NOISY_COMPARE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
}

/// Per-trial seeds drawn from one splitmix64 stream, shared by every cell so
/// algorithms are compared on the same noise draws.
inline std::vector<std::uint64_t> trial_seeds(std::uint64_t master, std::size_t trials) {
  std::vector<std::uint64_t> out(trials);
  std::uint64_t state = master;
  for (auto& s : out) s = splitmix64(state);
  return out;
}

struct SweepConfig {
  TaskConfig task;
  std::vector<Algorithm> algorithms;
  json instance;
  NoiseKind kind = NoiseKind::None;
  AdversaryStrategy adversary = AdversaryStrategy::Pessimistic;
  std::vector<double> levels;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

inline TaskConfig task_from_json(const json& j, Task task) {
  TaskConfig c;
  c.task = task;
  c.delta = j.value("delta", 0.1);
  const std::string preset = j.value("preset", std::string("theory"));
  require(preset == "theory" || preset == "experiment", "preset must be theory or experiment");
  c.experiment_preset = preset == "experiment";
  c.query = j.value("query", 0u);
  c.k = j.value("k", std::size_t{2});
  if (j.contains("first_center")) c.first_center = j.at("first_center").get<ItemId>();
  c.m = j.value("m", std::size_t{0});
  const std::string gamma = j.value("gamma_preset", std::string("experiment"));
  require(gamma == "theory" || gamma == "experiment", "gamma_preset must be theory or experiment");
  c.theory_gamma = gamma == "theory";
  c.core_size = j.value("core_size", std::size_t{0});
  c.linkage = parse_linkage(j.value("linkage", std::string("single")));
  c.partition_from_labels = j.value("partition_from_labels", false);
  require(c.delta > 0.0 && c.delta < 1.0, "delta must lie in (0,1)");
  return c;
}

inline SweepConfig sweep_from_json(const json& j) {
  try {
    SweepConfig c;
    c.task = task_from_json(j.value("params", json::object()), parse_task(j.at("task").get<std::string>()));
    for (const auto& a : j.value("algorithms", json::array({"robust"})))
      c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    require(!c.algorithms.empty(), "sweep: algorithms must not be empty");
    c.instance = j.at("instance");
    const json& noise = j.at("noise");
    c.kind = parse_noise_kind(noise.at("kind").get<std::string>());
    c.adversary = parse_adversary(noise.value("adversary", std::string("pessimistic")));
    c.levels = noise.value("levels", std::vector<double>{0.0});
    require(!c.levels.empty(), "sweep: noise levels must not be empty");
    for (double l : c.levels) {
      require(std::isfinite(l) && l >= 0.0, "sweep: noise levels must be nonnegative");
      if (c.kind == NoiseKind::Probabilistic) require(l < 0.5, "sweep: p must lie in [0, 0.5)");
    }
    c.trials = j.value("trials", std::size_t{1});
    require(c.trials >= 1, "sweep: trials must be positive");
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sweep config: ") + e.what());
  }
}

/// Dataset from {"path","format"} or a named generator.
inline GroundTruth instance_from_json(const json& j) {
  try {
    if (j.contains("path"))
      return load_dataset(j.at("path").get<std::string>(), parse_format(j.value("format", std::string("points-csv"))));
    const std::string gen = j.at("generator").get<std::string>();
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    if (gen == "uniform-values") return gen_uniform_values(n, seed);
    if (gen == "uniform-points") return gen_uniform_points(n, j.value("dim", std::size_t{2}), seed);
    if (gen == "geometric-chain") return gen_geometric_chain(n, j.at("mu").get<double>(), j.at("eps").get<double>());
    if (gen == "planted-clusters")
      return gen_planted_clusters(n, j.at("k").get<std::size_t>(), j.value("separation", 10.0),
                                  j.value("m_min", std::size_t{1}), seed);
    throw ValidationError("unknown generator '" + gen + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  }
}

struct Summary {
  double mean = 0, median = 0, q10 = 0, q90 = 0;
  std::size_t count = 0;
};

/// Statistics over the finite entries of xs; quantiles by nearest rank.
inline Summary summarize(std::vector<double> xs) {
  std::erase_if(xs, [](double x) { return !std::isfinite(x); });
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  const auto at = [&](double q) {
    const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
    return xs[std::clamp<std::size_t>(i, 1, xs.size()) - 1];
  };
  s.q10 = at(0.1);
  s.q90 = at(0.9);
  s.median = xs.size() % 2 ? xs[xs.size() / 2] : 0.5 * (xs[xs.size() / 2 - 1] + xs[xs.size() / 2]);
  return s;
}

inline json summary_json(const Summary& s) {
  if (s.count == 0) return nullptr;
  return {{"mean", s.mean}, {"median", s.median}, {"q10", s.q10}, {"q90", s.q90}, {"count", s.count}};
}

struct SweepResult {
  json config;
  std::vector<TrialReport> trials;  // cell-major: algorithm, level, trial

  json cells() const {
    json out = json::array();
    std::size_t i = 0;
    while (i < trials.size()) {
      std::size_t j = i;
      while (j < trials.size() && trials[j].algorithm == trials[i].algorithm &&
             noise_level(trials[j].noise) == noise_level(trials[i].noise))
        ++j;
      std::vector<double> ratio, rank, fscore, objective, queries;
      for (std::size_t t = i; t < j; ++t) {
        ratio.push_back(trials[t].ratio);
        rank.push_back(trials[t].rank);
        fscore.push_back(trials[t].fscore);
        objective.push_back(trials[t].objective);
        queries.push_back(static_cast<double>(trials[t].queries));
      }
      out.push_back({{"algorithm", trials[i].algorithm},
                     {"noise_kind", to_string(trials[i].noise.kind)},
                     {"noise_level", noise_level(trials[i].noise)},
                     {"trials", j - i},
                     {"ratio", summary_json(summarize(ratio))},
                     {"rank", summary_json(summarize(rank))},
                     {"fscore", summary_json(summarize(fscore))},
                     {"objective", summary_json(summarize(objective))},
                     {"queries", summary_json(summarize(queries))}});
      i = j;
    }
    return out;
  }

  json to_json() const {
    json t = json::array();
    for (const auto& r : trials) t.push_back(noisy::to_json(r));
    return {{"config", config}, {"cells", cells()}, {"trials", t}};
  }

  void write_csv(std::ostream& out) const {
    write_csv_header(out);
    for (const auto& r : trials) write_csv_row(out, r);
  }
};

inline SweepResult sweep(const json& config_json, std::size_t threads = trial_threads()) {
  const SweepConfig cfg = sweep_from_json(config_json);
  const auto g = std::make_shared<const GroundTruth>(instance_from_json(cfg.instance));
  const auto seeds = trial_seeds(cfg.seed, cfg.trials);
  const std::size_t per_alg = cfg.levels.size() * cfg.trials;
  SweepResult res;
  res.config = config_json;
  res.trials.resize(cfg.algorithms.size() * per_alg);
  parallel_for(res.trials.size(), threads, [&](std::size_t i) {
    const Algorithm alg = cfg.algorithms[i / per_alg];
    const double level = cfg.levels[(i % per_alg) / cfg.trials];
    const std::size_t trial = i % cfg.trials;
    NoiseParams np;
    np.kind = cfg.kind;
    np.adversary = cfg.adversary;
    if (cfg.kind == NoiseKind::Adversarial) np.mu = level;
    if (cfg.kind == NoiseKind::Probabilistic) np.p = level;
    TrialReport r = run_trial(g, cfg.task, alg, np, seeds[trial]);
    r.trial = trial;
    res.trials[i] = std::move(r);
  });
  return res;
}

}  // namespace noisy
