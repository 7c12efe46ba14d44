#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "noisy/ground_truth.hpp"
#include "noisy/neighbor.hpp"
#include "noisy/oracle.hpp"
#include "noisy/selection.hpp"

namespace noisy {

enum class Linkage { Single, Complete };

/// Two records, one per cluster, whose distance stands for the linkage
/// distance between the clusters.
struct RepPair {
  ItemId a = 0;
  ItemId b = 0;
  bool operator==(const RepPair&) const = default;
};

struct Merge {
  std::size_t left = 0;   // smaller cluster id
  std::size_t right = 0;  // larger cluster id
  std::size_t id = 0;     // n + iteration
  RepPair rep;
  std::size_t iteration = 0;
  bool operator==(const Merge&) const = default;
};

/// Singletons are clusters 0..n-1; merge i creates cluster n+i.
struct Dendrogram {
  std::size_t n = 0;
  std::vector<Merge> merges;

  /// Throws unless there are n-1 merges forming one binary tree.
  void validate() const {
    require(merges.size() + 1 == n, "dendrogram: expected n-1 merges");
    std::vector<bool> used(2 * n, false);
    for (std::size_t i = 0; i < merges.size(); ++i) {
      const Merge& m = merges[i];
      require(m.id == n + i && m.iteration == i, "dendrogram: merge ids out of sequence");
      require(m.left < m.right && m.right < m.id, "dendrogram: child ids out of order");
      require(!used[m.left] && !used[m.right], "dendrogram: cluster merged twice");
      used[m.left] = used[m.right] = true;
    }
  }

  /// Leaves are ItemIds; no branch lengths since distances are never observed.
  std::string newick() const {
    if (n == 0) return ";";
    std::vector<std::string> text(n + merges.size());
    for (std::size_t i = 0; i < n; ++i) text[i] = std::to_string(i);
    for (const Merge& m : merges) text[m.id] = "(" + text[m.left] + "," + text[m.right] + ")";
    return (merges.empty() ? text[0] : text[merges.back().id]) + ";";
  }
};

struct HierarchyParams {
  Linkage linkage = Linkage::Single;
  double delta = 0.1;
  std::size_t iterations = 0;  // 0: 2 ceil(ln(n/delta))
  /// Required under probabilistic noise: a label per record whose groups have
  /// small diameter and more than ln n members.
  std::optional<std::vector<int>> partition;

  std::size_t t(std::size_t n) const {
    return iterations ? iterations
                      : std::max<std::size_t>(1, 2 * ceil_log(static_cast<double>(n) / delta));
  }
};

/// Answers "d(p) <= d(q)?" for representative pairs. Plain mode asks the
/// oracle once; partition mode votes over aligned members of the four groups.
class PairComparator {
 public:
  explicit PairComparator(Oracle& o) : o_(&o) {}
  PairComparator(Oracle& o, const std::vector<int>& labels) : o_(&o) {
    std::vector<int> keys(labels);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    groups_.resize(keys.size());
    group_of_.resize(labels.size());
    for (ItemId i = 0; i < labels.size(); ++i) {
      group_of_[i] = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), labels[i]) - keys.begin());
      groups_[group_of_[i]].push_back(i);
    }
  }

  bool operator()(RepPair p, RepPair q) const {
    if (groups_.empty()) return o_->compare_distances(p.a, p.b, q.a, q.b);
    const auto& g1 = groups_[group_of_[p.a]];
    const auto& g2 = groups_[group_of_[p.b]];
    const auto& g3 = groups_[group_of_[q.a]];
    const auto& g4 = groups_[group_of_[q.b]];
    const std::size_t m = std::min({g1.size(), g2.size(), g3.size(), g4.size()});
    std::size_t yes = 0;
    for (std::size_t i = 0; i < m; ++i) yes += o_->compare_distances(g1[i], g2[i], g3[i], g4[i]);
    return static_cast<double>(yes) >= kVoteFraction * static_cast<double>(m);
  }

  std::size_t group_count() const { return groups_.size(); }
  std::size_t smallest_group() const {
    std::size_t s = std::numeric_limits<std::size_t>::max();
    for (const auto& g : groups_) s = std::min(s, g.size());
    return s;
  }

 private:
  Oracle* o_;
  std::vector<std::vector<ItemId>> groups_;
  std::vector<std::size_t> group_of_;
};

/// Active clusters by slot, with a representative pair for every pair of
/// active slots. A merge keeps the lower slot.
class Adjacency {
 public:
  explicit Adjacency(std::size_t n) : n_(n), rep_(n * n), active_(n, true), id_(n) {
    for (std::size_t i = 0; i < n; ++i) {
      id_[i] = i;
      for (std::size_t j = 0; j < n; ++j)
        rep_[i * n + j] = {static_cast<ItemId>(i), static_cast<ItemId>(j)};
    }
    live_ = n;
  }

  std::size_t slots() const { return n_; }
  std::size_t live() const { return live_; }
  bool active(std::size_t s) const { return active_[s]; }
  std::size_t cluster_id(std::size_t s) const { return id_[s]; }
  /// First record lies in slot i's cluster, second in slot j's.
  RepPair rep(std::size_t i, std::size_t j) const { return rep_[i * n_ + j]; }

  std::vector<ItemId> active_slots() const {
    std::vector<ItemId> out;
    for (std::size_t s = 0; s < n_; ++s)
      if (active_[s]) out.push_back(static_cast<ItemId>(s));
    return out;
  }

  void set(std::size_t i, std::size_t j, RepPair p) {
    rep_[i * n_ + j] = p;
    rep_[j * n_ + i] = {p.b, p.a};
  }
  void retire(std::size_t s, std::size_t keep, std::size_t new_id) {
    active_[s] = false;
    id_[keep] = new_id;
    --live_;
  }

 private:
  std::size_t n_;
  std::vector<RepPair> rep_;
  std::vector<bool> active_;
  std::vector<std::size_t> id_;
  std::size_t live_ = 0;
};

/// Folds slot `b` into slot `a`. One comparison per other live cluster: the
/// nearer stored pair survives for single linkage, the farther for complete.
template <class Compare>
void merge_update(Adjacency& adj, std::size_t a, std::size_t b, Linkage linkage, const Compare& cmp,
                  std::size_t new_id) {
  require(a != b && adj.active(a) && adj.active(b), "merge_update: slots must be distinct and live");
  for (std::size_t k = 0; k < adj.slots(); ++k) {
    if (!adj.active(k) || k == a || k == b) continue;
    const RepPair pa = adj.rep(a, k), pb = adj.rep(b, k);
    const bool a_le_b = cmp(pa, pb);
    const bool keep_a = linkage == Linkage::Single ? a_le_b : !a_le_b;
    adj.set(a, k, keep_a ? pa : pb);
  }
  adj.retire(b, a, new_id);
}

namespace detail {

template <class Compare>
ItemId nearest_slot(const Adjacency& adj, std::size_t s, const Compare& cmp, const SelectionParams& sp,
                    Rng& rng) {
  std::vector<ItemId> cand;
  for (ItemId k : adj.active_slots())
    if (k != s) cand.push_back(k);
  auto le = [&](ItemId x, ItemId y) { return cmp(adj.rep(s, x), adj.rep(s, y)); };
  return max_adv(std::span<const ItemId>(cand), sp, le, Direction::Min, rng);
}

template <class Compare>
Dendrogram agglomerate_with(std::size_t n, const HierarchyParams& params, const Compare& cmp, Rng& rng) {
  SelectionParams sp = SelectionParams::theory(params.delta);
  sp.iterations = params.t(n);
  Adjacency adj(n);
  Dendrogram out{n, {}};
  std::vector<ItemId> nn(n);
  for (std::size_t s = 0; s < n; ++s) nn[s] = nearest_slot(adj, s, cmp, sp, rng);
  for (std::size_t it = 0; adj.live() > 1; ++it) {
    const auto live = adj.active_slots();
    auto le = [&](ItemId x, ItemId y) { return cmp(adj.rep(x, nn[x]), adj.rep(y, nn[y])); };
    const ItemId j = max_adv(std::span<const ItemId>(live), sp, le, Direction::Min, rng);
    const std::size_t a = std::min<std::size_t>(j, nn[j]), b = std::max<std::size_t>(j, nn[j]);
    Merge m;
    m.left = std::min(adj.cluster_id(a), adj.cluster_id(b));
    m.right = std::max(adj.cluster_id(a), adj.cluster_id(b));
    m.id = n + it;
    m.rep = adj.rep(j, nn[j]);
    m.iteration = it;
    out.merges.push_back(m);
    merge_update(adj, a, b, params.linkage, cmp, m.id);
    if (adj.live() == 1) break;
    nn[a] = nearest_slot(adj, a, cmp, sp, rng);
    // Clusters that pointed at either half now point at a retired or changed
    // slot; refresh them from their own adjacency lists.
    for (ItemId k : adj.active_slots())
      if (k != a && (nn[k] == a || nn[k] == b)) nn[k] = nearest_slot(adj, k, cmp, sp, rng);
  }
  return out;
}

}  // namespace detail

/// Agglomerative clustering from singletons with the adjacency-list scheme.
/// Exact or adversarial oracles only (or p = 0), unless a pre-partition is
/// supplied.
inline Dendrogram agglomerate(std::size_t n, const HierarchyParams& params, Oracle& o, Rng& rng) {
  require(n >= 2, "agglomerate: need at least two records");
  require(params.delta > 0.0 && params.delta < 1.0, "agglomerate: delta must lie in (0,1)");
  if (params.partition) {
    require(params.partition->size() == n, "agglomerate: partition length must equal n");
    PairComparator cmp(o, *params.partition);
    require(static_cast<double>(cmp.smallest_group()) > std::log(static_cast<double>(n)),
            "agglomerate: every partition group needs more than ln n members");
    return detail::agglomerate_with(n, params, cmp, rng);
  }
  require(o.noise().kind != NoiseKind::Probabilistic || o.noise().p == 0.0,
          "agglomerate: probabilistic noise requires a pre-partition");
  return detail::agglomerate_with(n, params, PairComparator(o), rng);
}

/// Classical agglomeration on true distances, ties to the lexicographically
/// smallest (cluster id, cluster id) pair. The TDist reference.
inline Dendrogram reference_agglomerate(const GroundTruth& g, Linkage linkage) {
  const std::size_t n = g.size();
  require(n >= 2, "agglomerate: need at least two records");
  std::vector<double> d(n * n);
  std::vector<RepPair> rep(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d[i * n + j] = g.distance(static_cast<ItemId>(i), static_cast<ItemId>(j));
      rep[i * n + j] = {static_cast<ItemId>(i), static_cast<ItemId>(j)};
    }
  std::vector<bool> active(n, true);
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  Dendrogram out{n, {}};
  for (std::size_t it = 0; it + 1 < n; ++it) {
    std::size_t ba = 0, bb = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_ids{};
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const auto ids = std::minmax(id[i], id[j]);
        const double v = d[i * n + j];
        if (v < best || (v == best && std::pair(ids.first, ids.second) < best_ids)) {
          best = v;
          best_ids = {ids.first, ids.second};
          ba = i;
          bb = j;
        }
      }
    }
    out.merges.push_back({best_ids.first, best_ids.second, n + it, rep[ba * n + bb], it});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == ba || k == bb) continue;
      const double da = d[ba * n + k], db = d[bb * n + k];
      const bool keep_a = linkage == Linkage::Single ? da <= db : da >= db;
      const double v = keep_a ? da : db;
      const RepPair p = keep_a ? rep[ba * n + k] : rep[bb * n + k];
      d[ba * n + k] = d[k * n + ba] = v;
      rep[ba * n + k] = p;
      rep[k * n + ba] = {p.b, p.a};
    }
    active[bb] = false;
    id[ba] = n + it;
  }
  return out;
}

/// True linkage distance of each merge next to the smallest linkage distance
/// available at that iteration. Reads ground truth only.
struct MergeQuality {
  double merged = 0.0;
  double best = 0.0;
};

inline std::vector<MergeQuality> merge_quality(const GroundTruth& g, const Dendrogram& h, Linkage linkage) {
  const std::size_t n = h.n;
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;
  // Linkage distances between live clusters, keyed by cluster id.
  const std::size_t total = n + h.merges.size();
  std::vector<double> d(total * total, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i * total + j] = g.distance(static_cast<ItemId>(i), static_cast<ItemId>(j));
  std::vector<MergeQuality> out;
  for (const Merge& m : h.merges) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < live.size(); ++x)
      for (std::size_t y = x + 1; y < live.size(); ++y) best = std::min(best, d[live[x] * total + live[y]]);
    out.push_back({d[m.left * total + m.right], best});
    std::erase(live, m.left);
    std::erase(live, m.right);
    for (std::size_t k : live) {
      const double a = d[m.left * total + k], b = d[m.right * total + k];
      d[m.id * total + k] = d[k * total + m.id] = linkage == Linkage::Single ? std::min(a, b) : std::max(a, b);
    }
    live.push_back(m.id);
  }
  return out;
}

}  // namespace noisy
