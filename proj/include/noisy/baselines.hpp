#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "noisy/hierarchical.hpp"
#include "noisy/kcenter.hpp"
#include "noisy/neighbor.hpp"
#include "noisy/selection.hpp"

namespace noisy {

// ---------------------------------------------------------------------------
// Tour2: binary tournament over everything, no repetition.

template <LessEqualOracle C>
ItemId tour2_select(std::span<const ItemId> v, C&& le, Direction dir, Rng& rng) {
  return tournament(v, 2, le, dir, rng);
}

/// Farthest-first where each farthest point is a tournament winner over the
/// non-centers, compared by distance to their current (MCount) centers.
inline Clustering tour2_kcenter(std::size_t n, const KCenterParams& params, Oracle& o, Rng& rng) {
  params.validate(n);
  Clustering c;
  const auto all = all_items(n);
  c.centers.push_back(pick_first_center(params, all, rng));
  MCountTable table(n);
  table.add_center(c.centers.front(), o);
  while (c.centers.size() < params.k) {
    const auto assign = table.assignment();
    const auto cand = non_centers(n, c.centers);
    const ItemId far = tournament(std::span<const ItemId>(cand), 2, CenterPairView{&o, &assign},
                                  Direction::Max, rng);
    c.centers.push_back(far);
    table.add_center(far, o);
  }
  c.assign = table.assignment();
  return c;
}

/// Agglomeration where every closest pair is a tournament winner over all
/// live cluster pairs. Cubic in n.
inline Dendrogram tour2_agglomerate(std::size_t n, Linkage linkage, Oracle& o, Rng& rng) {
  require(n >= 2, "agglomerate: need at least two records");
  PairComparator cmp(o);
  Adjacency adj(n);
  Dendrogram out{n, {}};
  for (std::size_t it = 0; adj.live() > 1; ++it) {
    const auto live = adj.active_slots();
    std::vector<std::pair<ItemId, ItemId>> pairs;
    for (std::size_t x = 0; x < live.size(); ++x)
      for (std::size_t y = x + 1; y < live.size(); ++y) pairs.emplace_back(live[x], live[y]);
    auto le = [&](ItemId p, ItemId q) {
      return cmp(adj.rep(pairs[p].first, pairs[p].second), adj.rep(pairs[q].first, pairs[q].second));
    };
    const auto idx = all_items(pairs.size());
    const ItemId w = tournament(std::span<const ItemId>(idx), 2, le, Direction::Min, rng);
    const auto [a, b] = pairs[w];
    Merge m{std::min(adj.cluster_id(a), adj.cluster_id(b)), std::max(adj.cluster_id(a), adj.cluster_id(b)),
            n + it, adj.rep(a, b), it};
    out.merges.push_back(m);
    merge_update(adj, a, b, linkage, cmp, m.id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Samp: exhaustive comparison on a small uniform sample.

/// Uniform sample of min(size, |v|) distinct items, in sampled order.
inline std::vector<ItemId> sample_without_replacement(std::span<const ItemId> v, std::size_t size, Rng& rng) {
  std::vector<ItemId> out;
  std::sample(v.begin(), v.end(), std::back_inserter(out), std::min(size, v.size()), rng);
  return out;
}

template <LessEqualOracle C>
ItemId samp_select(std::span<const ItemId> v, C&& le, Direction dir, Rng& rng) {
  require(!v.empty(), "samp: empty set");
  const auto s = sample_without_replacement(v, ceil_sqrt(v.size()), rng);
  return count_max(std::span<const ItemId>(s), le, dir);
}

/// ceil(k ln n) points, at least k.
inline std::size_t samp_kcenter_size(std::size_t n, std::size_t k) {
  return std::min(n, std::max(k, ceil_log(static_cast<double>(n)) * k));
}

/// Farthest-first restricted to a k ln n sample (count_max picks each
/// farthest point), then every record goes to its MCount center.
inline Clustering samp_kcenter(std::size_t n, const KCenterParams& params, Oracle& o, Rng& rng) {
  params.validate(n);
  const auto all = all_items(n);
  auto s = sample_without_replacement(all, samp_kcenter_size(n, params.k), rng);
  Clustering c;
  if (params.first_center) {
    c.centers.push_back(*params.first_center);
    if (std::find(s.begin(), s.end(), *params.first_center) == s.end()) s.push_back(*params.first_center);
  } else {
    c.centers.push_back(s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)]);
  }
  std::vector<ItemId> assign(n, c.centers.front());
  while (c.centers.size() < params.k) {
    std::vector<ItemId> cand;
    for (ItemId x : s)
      if (std::find(c.centers.begin(), c.centers.end(), x) == c.centers.end()) cand.push_back(x);
    if (cand.empty()) break;
    for (ItemId x : cand) {
      std::size_t best = 0, best_votes = 0;
      for (std::size_t j = 0; j < c.centers.size(); ++j) {
        const std::size_t votes = mcount(x, j, c.centers, o);
        if (j == 0 || votes > best_votes) {
          best = j;
          best_votes = votes;
        }
      }
      assign[x] = c.centers[best];
    }
    c.centers.push_back(count_max(std::span<const ItemId>(cand), CenterPairView{&o, &assign}, Direction::Max));
  }
  if (c.centers.size() < params.k) c.warnings.push_back("sample smaller than k; fewer centers returned");
  c.assign = assign_adv(n, c.centers, o);
  return c;
}

// ---------------------------------------------------------------------------
// TDist: the same tasks on true distances, no oracle.

inline ItemId tdist_select(const GroundTruth& g, std::span<const ItemId> v, Direction dir) {
  require(!v.empty(), "tdist: empty set");
  ItemId best = v.front();
  for (ItemId x : v) {
    const double a = g.value(x), b = g.value(best);
    if (dir == Direction::Max ? a > b || (a == b && x < best) : a < b || (a == b && x < best)) best = x;
  }
  return best;
}

inline ItemId tdist_neighbor(const GroundTruth& g, ItemId q, std::span<const ItemId> v, Direction dir) {
  const auto items = without(v, q);
  require(!items.empty(), "tdist: no candidates besides the query point");
  ItemId best = items.front();
  for (ItemId x : items) {
    const double a = g.distance(q, x), b = g.distance(q, best);
    if (dir == Direction::Max ? a > b || (a == b && x < best) : a < b || (a == b && x < best)) best = x;
  }
  return best;
}

/// Farthest-first on true distances; ties to the smallest id, assignment ties
/// to the earliest center.
inline Clustering tdist_kcenter(const GroundTruth& g, std::size_t k, ItemId first) {
  const std::size_t n = g.size();
  require(k >= 1 && k <= n, "kcenter: k must lie in [1, n]");
  require(first < n, "kcenter: first center out of range");
  Clustering c;
  c.centers = {first};
  c.assign.assign(n, first);
  std::vector<double> dist(n);
  for (ItemId i = 0; i < n; ++i) dist[i] = g.distance(i, first);
  std::vector<bool> is_center(n, false);
  is_center[first] = true;
  while (c.centers.size() < k) {
    ItemId far = 0;
    double best = -1.0;
    for (ItemId i = 0; i < n; ++i)
      if (!is_center[i] && dist[i] > best) {
        best = dist[i];
        far = i;
      }
    c.centers.push_back(far);
    is_center[far] = true;
    for (ItemId i = 0; i < n; ++i) {
      const double d = g.distance(i, far);
      if (d < dist[i] || i == far) {
        dist[i] = d;
        c.assign[i] = far;
      }
    }
  }
  return c;
}

}  // namespace noisy
