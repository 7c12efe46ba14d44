#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "noisy/oracle.hpp"
#include "noisy/selection.hpp"

namespace noisy {

/// Distances from a fixed query point, seen as a value set: a <= b asks
/// O(q,a,q,b).
struct DistanceView {
  Oracle* oracle;
  ItemId query;
  bool operator()(ItemId a, ItemId b) const { return oracle->compare_distances(query, a, query, b); }
};

/// Points near `anchor` used to outvote persistent noise. The algorithms never
/// learn how near they actually are.
struct CoreSet {
  ItemId anchor = 0;
  std::vector<ItemId> members;
};

inline constexpr double kVoteFraction = 0.3;
inline constexpr double kMaxSupportedFlipRate = 0.4;

/// ceil(6 ln(1/delta)): the smallest core the robust comparison accepts.
inline std::size_t min_core_size(double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  return static_cast<std::size_t>(std::ceil(6.0 * std::log(1.0 / delta)));
}

inline std::vector<ItemId> without(std::span<const ItemId> v, ItemId q) {
  std::vector<ItemId> out;
  out.reserve(v.size());
  for (ItemId x : v)
    if (x != q) out.push_back(x);
  return out;
}

/// Votes over the core that v_i is at most as far as v_j: the number of x in S
/// with O(x,v_i,x,v_j) == Yes. |S| queries.
inline std::size_t fcount(ItemId vi, ItemId vj, const CoreSet& core, Oracle& o) {
  std::size_t yes = 0;
  for (ItemId x : core.members) yes += o.compare_distances(x, vi, x, vj);
  return yes;
}

/// Robust "is d(u,v_i) <= d(u,v_j) ?": Yes iff at least 30% of the core votes
/// Yes.
inline bool pairwise_comp(ItemId vi, ItemId vj, const CoreSet& core, Oracle& o) {
  require(!core.members.empty(), "pairwise_comp: empty core");
  return static_cast<double>(fcount(vi, vj, core, o)) >=
         kVoteFraction * static_cast<double>(core.members.size());
}

/// DistanceView with every comparison replaced by pairwise_comp.
struct PairwiseCompView {
  Oracle* oracle;
  const CoreSet* core;
  bool operator()(ItemId a, ItemId b) const { return pairwise_comp(a, b, *core, *oracle); }
};

inline ItemId farthest_adv(ItemId q, std::span<const ItemId> v, const SelectionParams& params,
                           Oracle& o, Rng& rng) {
  const auto items = without(v, q);
  require(!items.empty(), "farthest: no candidates besides the query point");
  return max_adv(std::span<const ItemId>(items), params, DistanceView{&o, q}, Direction::Max, rng);
}

inline ItemId nearest_adv(ItemId q, std::span<const ItemId> v, const SelectionParams& params,
                          Oracle& o, Rng& rng) {
  const auto items = without(v, q);
  require(!items.empty(), "nearest: no candidates besides the query point");
  return max_adv(std::span<const ItemId>(items), params, DistanceView{&o, q}, Direction::Min, rng);
}

/// Iterations used by the probabilistic neighbour search: 2 ceil(ln(2n/delta)).
inline std::size_t prob_neighbor_iterations(std::size_t n, double delta) {
  return std::max<std::size_t>(1, 2 * ceil_log(2.0 * static_cast<double>(n) / delta));
}

namespace detail {
inline ItemId neighbor_prob(ItemId q, std::span<const ItemId> v, const CoreSet& core,
                            SelectionParams params, Oracle& o, Rng& rng, Direction dir) {
  require(core.members.size() >= min_core_size(params.delta),
          "core has " + std::to_string(core.members.size()) + " members; need at least " +
              std::to_string(min_core_size(params.delta)));
  const auto items = without(v, q);
  require(!items.empty(), "no candidates besides the query point");
  if (params.iterations == 0) params.iterations = prob_neighbor_iterations(items.size(), params.delta);
  return max_adv(std::span<const ItemId>(items), params, PairwiseCompView{&o, &core}, dir, rng);
}
}  // namespace detail

/// Sample-plus-partition farthest search over pairwise_comp. Unless the caller
/// fixes the iteration count, t = 2 ceil(ln(2n/delta)).
inline ItemId farthest_prob(ItemId q, std::span<const ItemId> v, const CoreSet& core,
                            const SelectionParams& params, Oracle& o, Rng& rng) {
  return detail::neighbor_prob(q, v, core, params, o, rng, Direction::Max);
}

inline ItemId nearest_prob(ItemId q, std::span<const ItemId> v, const CoreSet& core,
                           const SelectionParams& params, Oracle& o, Rng& rng) {
  return detail::neighbor_prob(q, v, core, params, o, rng, Direction::Min);
}

/// Heuristic core for standalone neighbour queries: the min_core_size(delta)
/// items that repeated count_max_prob(Min) calls over D(q) report as nearest.
inline CoreSet heuristic_core(ItemId q, std::span<const ItemId> v, double delta, double kappa,
                              Oracle& o, Rng& rng) {
  auto rest = without(v, q);
  const std::size_t size = min_core_size(delta);
  require(rest.size() >= size, "heuristic_core: fewer than " + std::to_string(size) +
                                   " candidates for the core");
  CoreSet core{q, {}};
  while (core.members.size() < size) {
    const ItemId next = count_max_prob(std::span<const ItemId>(rest), delta, kappa,
                                       DistanceView{&o, q}, Direction::Min, rng);
    core.members.push_back(next);
    rest.erase(std::find(rest.begin(), rest.end(), next));
  }
  return core;
}

}  // namespace noisy
