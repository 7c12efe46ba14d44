#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "noisy/ground_truth.hpp"

namespace noisy {

namespace detail {
inline std::uint64_t choose2(std::uint64_t m) { return m * (m - (m > 0 ? 1 : 0)) / 2; }
}  // namespace detail

/// Pair-counting F-score: harmonic mean of precision and recall over unordered
/// pairs placed in the same cluster. Two all-singleton partitions score 1.
/// Returns 0 when precision + recall is 0.
template <typename PredLabel, typename TrueLabel>
double pairwise_fscore(std::span<const PredLabel> pred, std::span<const TrueLabel> truth) {
  require(pred.size() == truth.size(), "pairwise_fscore: length mismatch");
  std::map<PredLabel, std::uint64_t> pred_sizes;
  std::map<TrueLabel, std::uint64_t> true_sizes;
  std::map<std::pair<PredLabel, TrueLabel>, std::uint64_t> joint;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++pred_sizes[pred[i]];
    ++true_sizes[truth[i]];
    ++joint[{pred[i], truth[i]}];
  }
  std::uint64_t pred_pairs = 0, true_pairs = 0, hits = 0;
  for (const auto& [_, c] : pred_sizes) pred_pairs += detail::choose2(c);
  for (const auto& [_, c] : true_sizes) true_pairs += detail::choose2(c);
  for (const auto& [_, c] : joint) hits += detail::choose2(c);
  if (pred_pairs == 0 && true_pairs == 0) return 1.0;
  const double precision = pred_pairs ? static_cast<double>(hits) / pred_pairs : 0.0;
  const double recall = true_pairs ? static_cast<double>(hits) / true_pairs : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

inline double pairwise_fscore(const std::vector<ItemId>& pred, const std::vector<int>& truth) {
  return pairwise_fscore(std::span<const ItemId>(pred), std::span<const int>(truth));
}

/// Largest distance from a point to the centre it is assigned to.
/// `assignment[i]` is the centre ItemId of point i.
inline double kcenter_objective(const GroundTruth& g, std::span<const ItemId> centers,
                                std::span<const ItemId> assignment) {
  require(assignment.size() == g.size(), "kcenter_objective: assignment must cover every point");
  double worst = 0.0;
  for (ItemId i = 0; i < assignment.size(); ++i) {
    require(std::find(centers.begin(), centers.end(), assignment[i]) != centers.end(),
            "kcenter_objective: point " + std::to_string(i) + " assigned to a non-center");
    worst = std::max(worst, g.distance(i, assignment[i]));
  }
  return worst;
}

/// 1-based rank of `id` among `items` ordered by key, best first; ties share
/// the best rank.
template <typename KeyFn>
std::size_t rank_of(ItemId id, std::span<const ItemId> items, KeyFn key, Direction dir) {
  const double k = key(id);
  std::size_t better = 0;
  for (ItemId x : items) {
    const double kx = key(x);
    if (dir == Direction::Max ? kx > k : kx < k) ++better;
  }
  return better + 1;
}

/// Quality ratio with 1.0 as perfect and larger as worse: optimum/achieved for
/// maximisation, achieved/optimum for minimisation.
inline double quality_ratio(double achieved, double optimum, Direction dir) {
  if (achieved == optimum) return 1.0;
  if (dir == Direction::Max) return achieved > 0.0 ? optimum / achieved : std::numeric_limits<double>::infinity();
  return optimum > 0.0 ? achieved / optimum : std::numeric_limits<double>::infinity();
}

}  // namespace noisy
