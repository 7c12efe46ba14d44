#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "noisy/neighbor.hpp"
#include "noisy/oracle.hpp"
#include "noisy/selection.hpp"

namespace noisy {

struct KCenterParams {
  static constexpr double kTheoryGamma = 450.0;
  static constexpr double kExperimentGamma = 2.0;

  std::size_t k = 1;
  double delta = 0.1;
  std::optional<ItemId> first_center;
  /// Approx-Farthest iteration count; 0 picks the mode's default.
  std::size_t iterations = 0;

  // Probabilistic mode only.
  std::size_t m = 0;          // smallest optimal cluster size; 0 means floor(n/(5k))
  double gamma = kExperimentGamma;
  std::size_t core_size = 0;  // 0 means ceil(8 gamma ln(n/delta) / 9)

  void validate(std::size_t n) const {
    require(k >= 1, "kcenter: k must be at least 1");
    require(k <= n, "kcenter: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    require(delta > 0.0 && delta < 1.0, "kcenter: delta must lie in (0,1)");
    require(gamma > 0.0, "kcenter: gamma must be positive");
    if (first_center) require(*first_center < n, "kcenter: first center out of range");
  }

  std::size_t smallest_cluster(std::size_t n) const {
    return m ? m : std::max<std::size_t>(1, n / (5 * k));
  }
  std::size_t core_target(std::size_t n) const {
    if (core_size) return core_size;
    return static_cast<std::size_t>(
        std::ceil(8.0 * gamma * std::log(static_cast<double>(n) / delta) / 9.0));
  }
};

/// Result of a k-center run. `assign[i]` is the centre ItemId of point i.
/// `cores` (parallel to `centers`) and `sampled` are filled in probabilistic
/// mode only.
struct Clustering {
  std::vector<ItemId> centers;
  std::vector<ItemId> assign;
  std::vector<std::vector<ItemId>> cores;
  std::vector<ItemId> sampled;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Adversarial noise

/// MCount(u, s_j): other centres s_k for which the oracle says
/// d(s_j,u) <= d(s_k,u). |S|-1 queries.
inline std::size_t mcount(ItemId u, std::size_t j, std::span<const ItemId> centers, Oracle& o) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (i != j) c += o.compare_distances(centers[j], u, centers[i], u);
  return c;
}

/// Running MCount scores for every point. Adding a centre queries each
/// non-centre once per existing centre, and that single answer credits one
/// side of the pair; with persistent answers this equals recomputing MCount
/// from scratch.
class MCountTable {
 public:
  explicit MCountTable(std::size_t n) : votes_(n), is_center_(n, 0) {}

  void add_center(ItemId s, Oracle& o) {
    const std::size_t c = centers_.size();
    is_center_[s] = 1;
    for (ItemId u = 0; u < votes_.size(); ++u) {
      auto& v = votes_[u];
      v.push_back(0);
      if (is_center_[u]) continue;
      for (std::size_t j = 0; j < c; ++j) {
        if (o.compare_distances(centers_[j], u, s, u)) ++v[j];
        else ++v[c];
      }
    }
    centers_.push_back(s);
  }

  /// Centre index with the highest MCount; ties go to the earliest centre.
  std::size_t best(ItemId u) const {
    if (is_center_[u]) return static_cast<std::size_t>(
        std::find(centers_.begin(), centers_.end(), u) - centers_.begin());
    const auto& v = votes_[u];
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  }

  std::size_t votes(ItemId u, std::size_t j) const { return votes_[u][j]; }
  const std::vector<ItemId>& centers() const { return centers_; }

  std::vector<ItemId> assignment() const {
    std::vector<ItemId> a(votes_.size());
    for (ItemId u = 0; u < a.size(); ++u) a[u] = centers_[best(u)];
    return a;
  }

 private:
  std::vector<std::vector<std::uint32_t>> votes_;
  std::vector<char> is_center_;
  std::vector<ItemId> centers_;
};

/// Assigns each of the n points to the centre with the highest MCount.
/// Centres map to themselves without queries.
inline std::vector<ItemId> assign_adv(std::size_t n, std::span<const ItemId> centers, Oracle& o) {
  require(!centers.empty(), "assign: no centers");
  MCountTable table(n);
  for (ItemId s : centers) table.add_center(s, o);
  return table.assignment();
}

/// Comparator over (point, assigned centre) distances: a <= b asks
/// O(a, c(a), b, c(b)).
struct CenterPairView {
  Oracle* oracle;
  const std::vector<ItemId>* assign;
  bool operator()(ItemId a, ItemId b) const {
    return oracle->compare_distances(a, (*assign)[a], b, (*assign)[b]);
  }
};

inline std::vector<ItemId> non_centers(std::size_t n, std::span<const ItemId> centers) {
  std::vector<char> c(n, 0);
  for (ItemId s : centers) c[s] = 1;
  std::vector<ItemId> out;
  for (ItemId i = 0; i < n; ++i)
    if (!c[i]) out.push_back(i);
  return out;
}

inline std::size_t adv_farthest_iterations(std::size_t k, double delta) {
  return std::max<std::size_t>(1, ceil_log(2.0 * static_cast<double>(k) / delta));
}

/// Point whose distance to its assigned centre is (approximately) largest.
inline ItemId approx_farthest_adv(std::span<const ItemId> centers, const std::vector<ItemId>& assign,
                                  const SelectionParams& params, Oracle& o, Rng& rng) {
  const auto cand = non_centers(assign.size(), centers);
  require(!cand.empty(), "approx_farthest: every point is a center");
  return max_adv(std::span<const ItemId>(cand), params, CenterPairView{&o, &assign}, Direction::Max,
                 rng);
}

inline ItemId pick_first_center(const KCenterParams& params, std::span<const ItemId> pool, Rng& rng) {
  if (params.first_center) return *params.first_center;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

/// Greedy farthest-first k-center with MCount assignment.
inline Clustering greedy_kcenter_adv(std::size_t n, const KCenterParams& params, Oracle& o, Rng& rng) {
  params.validate(n);
  SelectionParams sel = SelectionParams::theory(params.delta);
  sel.iterations = params.iterations ? params.iterations : adv_farthest_iterations(params.k, params.delta);

  const auto everyone = all_items(n);
  MCountTable table(n);
  table.add_center(pick_first_center(params, everyone, rng), o);
  std::vector<ItemId> assign = table.assignment();
  while (table.centers().size() < params.k) {
    const ItemId s = approx_farthest_adv(table.centers(), assign, sel, o, rng);
    table.add_center(s, o);
    assign = table.assignment();
  }
  Clustering out;
  out.centers = table.centers();
  out.assign = std::move(assign);
  return out;
}

// ---------------------------------------------------------------------------
// Probabilistic noise

/// Clusters over the sample while the probabilistic greedy is running;
/// `members`, `cores` and `centers` are parallel.
struct ProbClusters {
  std::vector<ItemId> centers;
  std::vector<std::vector<ItemId>> members;
  std::vector<std::vector<ItemId>> cores;
  std::size_t core_size = 1;
  std::vector<std::string> warnings;

  std::size_t index_of(ItemId center) const {
    return static_cast<std::size_t>(std::find(centers.begin(), centers.end(), center) - centers.begin());
  }
};

/// The `size` members of `cluster` the oracle ranks closest to `s`, by
/// Count(u) = #{x : O(s,x,s,u) == No}; ties go to the smallest id.
/// O(|C|^2) queries. A cluster no larger than `size` is returned whole, and
/// `short_cluster` is set if it was strictly smaller.
inline std::vector<ItemId> identify_core(std::span<const ItemId> cluster, ItemId s, std::size_t size,
                                         Oracle& o, bool* short_cluster = nullptr,
                                         std::vector<std::size_t>* counts = nullptr) {
  require(!cluster.empty(), "identify_core: empty cluster");
  if (short_cluster) *short_cluster = cluster.size() < size;
  std::vector<std::pair<std::size_t, ItemId>> scored;
  scored.reserve(cluster.size());
  for (ItemId u : cluster) {
    std::size_t c = 0;
    for (ItemId x : cluster)
      if (x != u) c += !o.compare_distances(s, x, s, u);
    scored.emplace_back(c, u);
  }
  if (counts) {
    counts->clear();
    for (auto& [c, _] : scored) counts->push_back(c);
  }
  std::vector<ItemId> core;
  if (cluster.size() <= size) {
    core.assign(cluster.begin(), cluster.end());
    std::sort(core.begin(), core.end());
    return core;
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t i = 0; i < size; ++i) core.push_back(scored[i].second);
  std::sort(core.begin(), core.end());
  return core;
}

/// ACount(u, s_i, R): core points v of the current cluster for which the
/// oracle says d(u,s_i) <= d(u,v), i.e. votes that u is closer to the new
/// centre. |R| queries.
inline std::size_t acount(ItemId u, ItemId s_new, std::span<const ItemId> core, Oracle& o) {
  std::size_t c = 0;
  for (ItemId v : core) c += o.compare_distances(u, s_new, u, v);
  return c;
}

/// Robust (point, centre) comparison: is d(v_i,s_i) <= d(v_j,s_j) ? Same
/// cluster votes over the whole core; across clusters over the first
/// ceil(sqrt|R|) members of each core.
inline bool cluster_comp(ItemId vi, std::size_t ci, ItemId vj, std::size_t cj,
                         const ProbClusters& pc, Oracle& o) {
  const auto& ri = pc.cores[ci];
  const auto& rj = pc.cores[cj];
  require(!ri.empty() && !rj.empty(), "cluster_comp: missing core");
  std::size_t yes = 0, comparisons = 0;
  if (ci == cj) {
    for (ItemId x : ri) yes += o.compare_distances(vi, x, vj, x);
    comparisons = ri.size();
  } else {
    const std::size_t a = std::min(ri.size(), ceil_sqrt(ri.size()));
    const std::size_t b = std::min(rj.size(), ceil_sqrt(rj.size()));
    for (std::size_t x = 0; x < a; ++x)
      for (std::size_t y = 0; y < b; ++y) yes += o.compare_distances(vi, ri[x], vj, rj[y]);
    comparisons = a * b;
  }
  return static_cast<double>(yes) >= kVoteFraction * static_cast<double>(comparisons);
}

struct ClusterCompView {
  Oracle* oracle;
  const ProbClusters* pc;
  const std::vector<std::size_t>* cluster_of;  // centre index per point
  bool operator()(ItemId a, ItemId b) const {
    return cluster_comp(a, (*cluster_of)[a], b, (*cluster_of)[b], *pc, *oracle);
  }
};

/// Approx-Farthest over the sampled non-centres with cluster_comp as the
/// comparator. l = ceil(sqrt |sample|), t = ceil(ln(n/delta)) unless
/// overridden.
inline ItemId approx_farthest_prob(const ProbClusters& pc, std::size_t n, std::size_t sample_size,
                                   const KCenterParams& params, Oracle& o, Rng& rng) {
  std::vector<std::size_t> cluster_of(n, 0);
  std::vector<ItemId> cand;
  for (std::size_t c = 0; c < pc.members.size(); ++c)
    for (ItemId u : pc.members[c]) {
      cluster_of[u] = c;
      if (u != pc.centers[c]) cand.push_back(u);
    }
  require(!cand.empty(), "approx_farthest: every sampled point is a center");
  std::sort(cand.begin(), cand.end());
  SelectionParams sel = SelectionParams::theory(params.delta);
  sel.iterations = params.iterations
                       ? params.iterations
                       : std::max<std::size_t>(1, ceil_log(static_cast<double>(n) / params.delta));
  sel.partitions = std::min(cand.size(), ceil_sqrt(sample_size));
  return max_adv(std::span<const ItemId>(cand), sel, ClusterCompView{&o, &pc, &cluster_of},
                 Direction::Max, rng);
}

/// Opens a cluster at `s_new`, then moves each non-core, non-centre member u
/// of every existing cluster j when ACount(u, s_new, R(s_j)) > 0.3 |R(s_j)|.
/// Finally builds the new core.
inline void assign_prob(ProbClusters& pc, ItemId s_new, Oracle& o) {
  const std::size_t existing = pc.centers.size();
  for (std::size_t j = 0; j < existing; ++j) {
    std::erase(pc.members[j], s_new);
    std::erase(pc.cores[j], s_new);
  }
  pc.centers.push_back(s_new);
  pc.members.push_back({s_new});
  pc.cores.emplace_back();
  auto& moved = pc.members.back();
  for (std::size_t j = 0; j < existing; ++j) {
    const auto& core = pc.cores[j];
    require(!core.empty(), "assign: empty core");
    std::vector<ItemId> stay;
    for (ItemId u : pc.members[j]) {
      const bool fixed = u == pc.centers[j] || std::binary_search(core.begin(), core.end(), u);
      if (!fixed && static_cast<double>(acount(u, s_new, core, o)) >
                        kVoteFraction * static_cast<double>(core.size()))
        moved.push_back(u);
      else
        stay.push_back(u);
    }
    pc.members[j] = std::move(stay);
  }
  std::sort(moved.begin(), moved.end());
  bool short_cluster = false;
  pc.cores.back() = identify_core(moved, s_new, pc.core_size, o, &short_cluster);
  if (short_cluster)
    pc.warnings.push_back("cluster of center " + std::to_string(s_new) + " has " +
                          std::to_string(moved.size()) + " sampled points, fewer than the core size " +
                          std::to_string(pc.core_size) + "; using the whole cluster as core");
}

/// Places an unsampled point: start at s_1 and, for each later centre s_j,
/// switch to it when ACount(u, s_j, R(current)) >= 0.3 |R(current)|.
inline std::size_t assign_final(ItemId u, const ProbClusters& pc, Oracle& o) {
  std::size_t cur = 0;
  for (std::size_t j = 1; j < pc.centers.size(); ++j) {
    const auto& core = pc.cores[cur];
    if (static_cast<double>(acount(u, pc.centers[j], core, o)) >=
        kVoteFraction * static_cast<double>(core.size()))
      cur = j;
  }
  return cur;
}

/// Sample-based greedy k-center for persistent probabilistic noise.
inline Clustering greedy_kcenter_prob(std::size_t n, const KCenterParams& params, Oracle& o, Rng& rng) {
  params.validate(n);
  Clustering out;
  const double rate = std::min(
      1.0, params.gamma * std::log(static_cast<double>(n) / params.delta) /
               static_cast<double>(params.smallest_cluster(n)));
  std::vector<char> in_sample(n, 0);
  std::bernoulli_distribution coin(rate);
  for (ItemId i = 0; i < n; ++i) in_sample[i] = coin(rng);
  if (std::none_of(in_sample.begin(), in_sample.end(), [](char c) { return c; })) {
    out.warnings.push_back("sample came out empty; using every point");
    std::fill(in_sample.begin(), in_sample.end(), 1);
  }
  std::vector<ItemId> sample;
  for (ItemId i = 0; i < n; ++i)
    if (in_sample[i]) sample.push_back(i);

  const ItemId s1 = pick_first_center(params, sample, rng);
  if (!in_sample[s1]) {
    in_sample[s1] = 1;
    sample.insert(std::lower_bound(sample.begin(), sample.end(), s1), s1);
  }

  ProbClusters pc;
  pc.core_size = std::max<std::size_t>(1, params.core_target(n));
  pc.centers = {s1};
  pc.members = {sample};
  bool short_cluster = false;
  pc.cores = {identify_core(sample, s1, pc.core_size, o, &short_cluster)};
  if (short_cluster)
    pc.warnings.push_back("sample has " + std::to_string(sample.size()) +
                          " points, fewer than the core size " + std::to_string(pc.core_size));

  while (pc.centers.size() < params.k) {
    ItemId s;
    if (sample.size() > pc.centers.size()) {
      s = approx_farthest_prob(pc, n, sample.size(), params, o, rng);
    } else {
      // Sample exhausted: open the next centre at the smallest unchosen id.
      s = 0;
      while (in_sample[s]) ++s;
      in_sample[s] = 1;
      sample.insert(std::lower_bound(sample.begin(), sample.end(), s), s);
      pc.warnings.push_back("sample smaller than k; center " + std::to_string(s) +
                            " chosen without comparisons");
    }
    assign_prob(pc, s, o);
  }

  out.centers = pc.centers;
  out.cores = pc.cores;
  out.sampled = sample;
  out.assign.assign(n, s1);
  for (std::size_t c = 0; c < pc.members.size(); ++c)
    for (ItemId u : pc.members[c]) out.assign[u] = pc.centers[c];
  for (ItemId u = 0; u < n; ++u)
    if (!in_sample[u]) out.assign[u] = pc.centers[assign_final(u, pc, o)];
  out.warnings.insert(out.warnings.end(), pc.warnings.begin(), pc.warnings.end());
  return out;
}

}  // namespace noisy
