#pragma once

#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "noisy/baselines.hpp"
#include "noisy/ground_truth.hpp"
#include "noisy/hierarchical.hpp"
#include "noisy/kcenter.hpp"
#include "noisy/metrics.hpp"
#include "noisy/neighbor.hpp"
#include "noisy/report.hpp"
#include "noisy/selection.hpp"

namespace noisy {

enum class Task { Max, Farthest, Nearest, KCenter, HCluster };
enum class Algorithm { Robust, Tour2, Samp, TDist };

inline std::string to_string(Task t) {
  switch (t) {
    case Task::Max: return "max";
    case Task::Farthest: return "farthest";
    case Task::Nearest: return "nn";
    case Task::KCenter: return "kcenter";
    case Task::HCluster: return "hcluster";
  }
  return "max";
}

inline Task parse_task(const std::string& s) {
  for (Task t : {Task::Max, Task::Farthest, Task::Nearest, Task::KCenter, Task::HCluster})
    if (to_string(t) == s) return t;
  throw ValidationError("unknown task '" + s + "'");
}

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Robust: return "robust";
    case Algorithm::Tour2: return "tour2";
    case Algorithm::Samp: return "samp";
    case Algorithm::TDist: return "tdist";
  }
  return "robust";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::Robust, Algorithm::Tour2, Algorithm::Samp, Algorithm::TDist})
    if (to_string(a) == s) return a;
  throw ValidationError("unknown algorithm '" + s + "'");
}

inline std::string to_string(Linkage l) { return l == Linkage::Single ? "single" : "complete"; }
inline Linkage parse_linkage(const std::string& s) {
  if (s == "single") return Linkage::Single;
  if (s == "complete") return Linkage::Complete;
  throw ValidationError("unknown linkage '" + s + "'");
}

/// Task-specific knobs shared by the CLI and sweeps.
struct TaskConfig {
  Task task = Task::Max;
  double delta = 0.1;
  bool experiment_preset = false;  // selection: t=1 and scaled elimination constants
  ItemId query = 0;                // farthest / nn
  // kcenter
  std::size_t k = 2;
  std::optional<ItemId> first_center;
  std::size_t m = 0;
  bool theory_gamma = false;
  std::size_t core_size = 0;
  // hcluster
  Linkage linkage = Linkage::Single;
  bool partition_from_labels = false;

  SelectionParams selection() const {
    return experiment_preset ? SelectionParams::experiment(delta) : SelectionParams::theory(delta);
  }
  KCenterParams kcenter() const {
    KCenterParams p;
    p.k = k;
    p.delta = delta;
    p.first_center = first_center;
    p.m = m;
    p.gamma = theory_gamma ? KCenterParams::kTheoryGamma : KCenterParams::kExperimentGamma;
    p.core_size = core_size;
    return p;
  }
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Algorithm randomness for a run seed, kept apart from the oracle's noise
/// stream which uses the seed directly.
inline Rng algorithm_rng(std::uint64_t seed) {
  std::uint64_t s = seed ^ 0x5851f42d4c957f2dULL;
  return Rng(splitmix64(s));
}

namespace detail {

inline json merges_json(const Dendrogram& h) {
  json out = json::array();
  for (const Merge& m : h.merges)
    out.push_back({{"left", m.left}, {"right", m.right}, {"id", m.id}, {"rep", {m.rep.a, m.rep.b}},
                   {"iteration", m.iteration}});
  return out;
}

inline void evaluate_selection(const GroundTruth& g, ItemId winner, TrialReport& r) {
  const auto all = all_items(g.size());
  const ItemId best = tdist_select(g, all, Direction::Max);
  r.rank = static_cast<double>(rank_of(winner, all, [&](ItemId x) { return g.value(x); }, Direction::Max));
  r.ratio = quality_ratio(g.value(winner), g.value(best), Direction::Max);
  r.objective = g.value(winner);
  r.output = {{"winner", winner}, {"true_rank", r.rank}, {"true_ratio", number_or_null(r.ratio)}};
}

inline void evaluate_neighbor(const GroundTruth& g, ItemId q, ItemId winner, Direction dir, TrialReport& r) {
  const auto all = all_items(g.size());
  const auto rest = without(all, q);
  const ItemId best = tdist_neighbor(g, q, all, dir);
  const auto dist = [&](ItemId x) { return g.distance(q, x); };
  r.rank = static_cast<double>(rank_of(winner, rest, dist, dir));
  r.ratio = quality_ratio(dist(winner), dist(best), dir);
  r.objective = dist(winner);
  r.output = {{"winner", winner}, {"true_distance", dist(winner)}, {"optimum_distance", dist(best)}};
}

inline void evaluate_kcenter(const GroundTruth& g, const Clustering& c, std::size_t k, TrialReport& r) {
  r.objective = kcenter_objective(g, c.centers, c.assign);
  const Clustering ref = tdist_kcenter(g, k, c.centers.front());
  const double opt = kcenter_objective(g, ref.centers, ref.assign);
  r.ratio = quality_ratio(r.objective, opt, Direction::Min);
  r.output = {{"centers", c.centers}, {"objective", r.objective}, {"ratio_vs_tdist", number_or_null(r.ratio)}};
  if (g.labels()) {
    r.fscore = pairwise_fscore(c.assign, *g.labels());
    r.output["fscore"] = r.fscore;
  }
  r.output["assignment"] = c.assign;
  for (const auto& w : c.warnings) r.warnings.push_back(w);
}

inline void evaluate_hcluster(const GroundTruth& g, const Dendrogram& h, Linkage linkage, const NoiseParams& np,
                              TrialReport& r) {
  const auto q = merge_quality(g, h, linkage);
  const auto ref = merge_quality(g, reference_agglomerate(g, linkage), linkage);
  double sum = 0.0, ref_sum = 0.0;
  std::size_t within = 0;
  const double bound = std::pow(1.0 + (np.kind == NoiseKind::Adversarial ? np.mu : 0.0), 3);
  for (std::size_t i = 0; i < q.size(); ++i) {
    sum += q[i].merged;
    ref_sum += ref[i].merged;
    within += q[i].merged <= bound * q[i].best + 1e-12;
  }
  r.objective = q.empty() ? 0.0 : sum / static_cast<double>(q.size());
  r.ratio = quality_ratio(sum, ref_sum, Direction::Min);
  r.output = {{"merges", merges_json(h)},
              {"newick", h.newick()},
              {"mean_merge_distance", r.objective},
              {"merges_within_cubed_band", q.empty() ? 1.0 : static_cast<double>(within) / static_cast<double>(q.size())}};
}

}  // namespace detail

/// Runs one algorithm against the given oracle and scores it on the ground
/// truth. The ledger delta during the algorithm is the query count; scoring
/// never queries.
inline TrialReport run_with_oracle(const GroundTruth& g, const TaskConfig& cfg, Algorithm alg, Oracle& o,
                                   std::uint64_t seed) {
  TrialReport r;
  r.algorithm = to_string(alg);
  r.task = to_string(cfg.task);
  r.noise = o.noise();
  r.seed = seed;
  Rng rng = algorithm_rng(seed);
  const std::size_t n = g.size();
  const auto all = all_items(n);
  const std::uint64_t before = o.ledger_read();
  const auto start = std::chrono::steady_clock::now();
  // p = 0 is an exact oracle and runs the exact-oracle variants.
  const bool prob = o.noise().kind == NoiseKind::Probabilistic && o.noise().p > 0.0;
  const auto stop = [&] {
    r.queries = o.ledger_read() - before;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  switch (cfg.task) {
    case Task::Max: {
      require(g.mode() == GroundTruth::Mode::Values, "max needs a values-csv dataset");
      const ValueView le{&o};
      ItemId w = 0;
      switch (alg) {
        case Algorithm::Robust:
          w = prob ? count_max_prob(std::span<const ItemId>(all), cfg.delta, cfg.selection().kappa, le, Direction::Max, rng)
                   : max_adv(std::span<const ItemId>(all), cfg.selection(), le, Direction::Max, rng);
          break;
        case Algorithm::Tour2: w = tour2_select(std::span<const ItemId>(all), le, Direction::Max, rng); break;
        case Algorithm::Samp: w = samp_select(std::span<const ItemId>(all), le, Direction::Max, rng); break;
        case Algorithm::TDist: w = tdist_select(g, all, Direction::Max); break;
      }
      stop();
      detail::evaluate_selection(g, w, r);
      break;
    }
    case Task::Farthest:
    case Task::Nearest: {
      require(g.is_metric(), "farthest/nn need a points-csv or matrix dataset");
      require(cfg.query < n, "query id out of range");
      const Direction dir = cfg.task == Task::Farthest ? Direction::Max : Direction::Min;
      const DistanceView view{&o, cfg.query};
      const auto rest = without(all, cfg.query);
      ItemId w = 0;
      switch (alg) {
        case Algorithm::Robust:
          if (prob) {
            const CoreSet core = heuristic_core(cfg.query, all, cfg.delta, cfg.selection().kappa, o, rng);
            SelectionParams sp = cfg.selection();
            sp.iterations = 0;
            w = dir == Direction::Max ? farthest_prob(cfg.query, all, core, sp, o, rng)
                                      : nearest_prob(cfg.query, all, core, sp, o, rng);
          } else {
            w = dir == Direction::Max ? farthest_adv(cfg.query, all, cfg.selection(), o, rng)
                                      : nearest_adv(cfg.query, all, cfg.selection(), o, rng);
          }
          break;
        case Algorithm::Tour2: w = tour2_select(std::span<const ItemId>(rest), view, dir, rng); break;
        case Algorithm::Samp: w = samp_select(std::span<const ItemId>(rest), view, dir, rng); break;
        case Algorithm::TDist: w = tdist_neighbor(g, cfg.query, all, dir); break;
      }
      stop();
      detail::evaluate_neighbor(g, cfg.query, w, dir, r);
      break;
    }
    case Task::KCenter: {
      require(g.is_metric(), "kcenter needs a points-csv or matrix dataset");
      const KCenterParams kp = cfg.kcenter();
      Clustering c;
      switch (alg) {
        case Algorithm::Robust:
          c = prob ? greedy_kcenter_prob(n, kp, o, rng) : greedy_kcenter_adv(n, kp, o, rng);
          break;
        case Algorithm::Tour2: c = tour2_kcenter(n, kp, o, rng); break;
        case Algorithm::Samp: c = samp_kcenter(n, kp, o, rng); break;
        case Algorithm::TDist:
          kp.validate(n);
          c = tdist_kcenter(g, kp.k, pick_first_center(kp, all, rng));
          break;
      }
      stop();
      detail::evaluate_kcenter(g, c, kp.k, r);
      break;
    }
    case Task::HCluster: {
      require(g.is_metric(), "hcluster needs a points-csv or matrix dataset");
      Dendrogram h;
      switch (alg) {
        case Algorithm::Robust: {
          HierarchyParams hp;
          hp.linkage = cfg.linkage;
          hp.delta = cfg.delta;
          if (cfg.partition_from_labels) {
            require(g.labels().has_value(), "partition from labels requested but the dataset has no labels");
            hp.partition = *g.labels();
          }
          h = agglomerate(n, hp, o, rng);
          break;
        }
        case Algorithm::Tour2: h = tour2_agglomerate(n, cfg.linkage, o, rng); break;
        case Algorithm::Samp: throw ValidationError("samp baseline is not defined for hcluster");
        case Algorithm::TDist: h = reference_agglomerate(g, cfg.linkage); break;
      }
      stop();
      detail::evaluate_hcluster(g, h, cfg.linkage, o.noise(), r);
      break;
    }
  }
  r.output["queries"] = r.queries;
  return r;
}

/// Fresh simulated oracle seeded with `seed`, then run_with_oracle.
inline TrialReport run_trial(std::shared_ptr<const GroundTruth> g, const TaskConfig& cfg, Algorithm alg,
                             NoiseParams noise, std::uint64_t seed) {
  noise.seed = seed;
  noise.delta = cfg.delta;
  Oracle o(g, noise);
  return run_with_oracle(*g, cfg, alg, o, seed);
}

}  // namespace noisy
