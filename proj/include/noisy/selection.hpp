#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "noisy/oracle.hpp"
#include "noisy/types.hpp"

namespace noisy {

/// A noisy "is a <= b ?" comparator over items. Every selection routine below
/// is written against this, so the same code runs over raw values, distances
/// from a query point, (point, centre) pairs, or robust multi-query votes.
template <typename C>
concept LessEqualOracle = requires(C& c, ItemId a, ItemId b) {
  { c(a, b) } -> std::convertible_to<bool>;
};

using Rng = std::mt19937_64;

inline std::size_t ceil_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

inline std::size_t ceil_log(double x) {
  return x <= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(std::log(x)));
}

/// Knobs shared by the tournament-based selection routines. Zero for
/// `iterations` or `partitions` means "use the default for this n".
struct SelectionParams {
  std::size_t iterations = 0;  // t
  std::size_t partitions = 0;  // l
  std::size_t arity = 2;       // lambda
  double kappa = 1.0;          // scale on the 100/50 elimination constants
  double delta = 0.1;

  static constexpr double kExperimentKappa = 0.1;

  /// t = 2 ceil(ln(2/delta)), paper constants for elimination.
  static SelectionParams theory(double delta) {
    SelectionParams p;
    p.delta = delta;
    return p;
  }
  /// t = 1 and elimination constants scaled down for desk-scale n.
  static SelectionParams experiment(double delta) {
    SelectionParams p;
    p.delta = delta;
    p.iterations = 1;
    p.kappa = kExperimentKappa;
    return p;
  }

  std::size_t t() const {
    return iterations ? iterations : std::max<std::size_t>(1, 2 * ceil_log(2.0 / delta));
  }
  std::size_t l(std::size_t n) const {
    return std::clamp<std::size_t>(partitions ? partitions : ceil_sqrt(n), 1, std::max<std::size_t>(n, 1));
  }

  void validate() const {
    require(arity >= 2, "selection: arity must be at least 2");
    require(delta > 0.0 && delta < 1.0, "selection: delta must lie in (0,1)");
    require(kappa > 0.0, "selection: kappa must be positive");
  }
};

/// Comparator over the values of a Values-mode oracle.
struct ValueView {
  Oracle* oracle;
  bool operator()(ItemId a, ItemId b) const { return oracle->compare_values(a, b); }
};

/// Number of x in `s` (skipping entries equal to v) that the oracle places on
/// the far side of v: smaller than v for Max, larger for Min. One query per
/// counted entry; duplicate entries are queried again.
template <LessEqualOracle C>
std::size_t count_score(ItemId v, std::span<const ItemId> s, C&& le, Direction dir) {
  std::size_t count = 0;
  for (ItemId x : s) {
    if (x == v) continue;
    const bool yes = le(v, x);
    if (dir == Direction::Max ? !yes : yes) ++count;
  }
  return count;
}

/// Item with the highest count_score against the rest of `s`; ties go to the
/// smallest id. |s|(|s|-1) queries for distinct items.
template <LessEqualOracle C>
ItemId count_max(std::span<const ItemId> s, C&& le, Direction dir) {
  require(!s.empty(), "count_max: empty set");
  ItemId best = s.front();
  std::size_t best_count = 0;
  bool first = true;
  for (ItemId v : s) {
    const std::size_t c = count_score(v, s, le, dir);
    if (first || c > best_count || (c == best_count && v < best)) {
      best = v;
      best_count = c;
      first = false;
    }
  }
  return best;
}

/// Tournament over items in the given leaf order: consecutive groups of
/// `arity` are resolved with count_max, a lone trailing item gets a bye.
template <LessEqualOracle C>
ItemId tournament_in_order(std::vector<ItemId> level, std::size_t arity, C&& le, Direction dir) {
  require(!level.empty(), "tournament: empty set");
  require(arity >= 2, "tournament: arity must be at least 2");
  while (level.size() > 1) {
    std::vector<ItemId> next;
    next.reserve((level.size() + arity - 1) / arity);
    for (std::size_t i = 0; i < level.size(); i += arity) {
      const std::size_t len = std::min(arity, level.size() - i);
      if (len == 1) {
        next.push_back(level[i]);
      } else {
        next.push_back(count_max(std::span<const ItemId>(level.data() + i, len), le, dir));
      }
    }
    level = std::move(next);
  }
  return level.front();
}

/// Balanced `arity`-ary tournament over a random permutation of `s`.
template <LessEqualOracle C>
ItemId tournament(std::span<const ItemId> s, std::size_t arity, C&& le, Direction dir, Rng& rng) {
  std::vector<ItemId> leaves(s.begin(), s.end());
  std::shuffle(leaves.begin(), leaves.end(), rng);
  return tournament_in_order(std::move(leaves), arity, le, dir);
}

/// Splits `v` at random into `parts` groups whose sizes differ by at most one
/// and returns the binary-tournament winner of each group.
template <LessEqualOracle C>
std::vector<ItemId> tournament_partition(std::span<const ItemId> v, std::size_t parts, C&& le,
                                         Direction dir, Rng& rng) {
  require(parts >= 1, "tournament_partition: need at least one part");
  require(parts <= v.size(), "tournament_partition: more parts than items");
  std::vector<ItemId> shuffled(v.begin(), v.end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<ItemId> winners;
  winners.reserve(parts);
  const std::size_t base = shuffled.size() / parts, extra = shuffled.size() % parts;
  std::size_t at = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    std::vector<ItemId> part(shuffled.begin() + at, shuffled.begin() + at + len);
    at += len;
    winners.push_back(tournament_in_order(std::move(part), 2, le, dir));
  }
  return winners;
}

/// Sample-plus-partition maximum. Draws ceil(sqrt n) * t items with
/// replacement, adds the winners of t random tournament partitions into l
/// parts, and runs count_max over the de-duplicated union.
template <LessEqualOracle C>
ItemId max_adv(std::span<const ItemId> v, const SelectionParams& params, C&& le, Direction dir,
               Rng& rng) {
  require(!v.empty(), "max_adv: empty set");
  params.validate();
  if (v.size() == 1) return v.front();
  const std::size_t n = v.size();
  const std::size_t t = params.t();
  const std::size_t l = params.l(n);

  std::vector<ItemId> pool;
  pool.reserve(ceil_sqrt(n) * t + l * t);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t i = 0; i < ceil_sqrt(n) * t; ++i) pool.push_back(v[pick(rng)]);
  for (std::size_t round = 0; round < t; ++round) {
    auto winners = tournament_partition(v, l, le, dir, rng);
    pool.insert(pool.end(), winners.begin(), winners.end());
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return count_max(std::span<const ItemId>(pool), le, dir);
}

struct EliminationTrace {
  ItemId winner = 0;
  std::size_t rounds = 0;
  std::size_t sample_size = 0;
  double threshold = 0.0;
  std::vector<std::size_t> survivors;  // candidate count after each round
};

/// Sampling-based elimination for persistent probabilistic noise. Each round
/// draws s = ceil(kappa * 100 ln(n/delta)) items with replacement, keeps the
/// unsampled items whose count against the sample reaches kappa * 50
/// ln(n/delta), and drops the sample. Stops once at most s candidates remain
/// or after ceil(ln n) rounds, then finishes with count_max.
template <LessEqualOracle C>
EliminationTrace count_max_prob_traced(std::span<const ItemId> v, double delta, double kappa,
                                       C&& le, Direction dir, Rng& rng) {
  require(!v.empty(), "count_max_prob: empty set");
  require(delta > 0.0 && delta < 1.0, "count_max_prob: delta must lie in (0,1)");
  require(kappa > 0.0, "count_max_prob: kappa must be positive");
  const double n = static_cast<double>(v.size());
  const double log_term = std::log(n / delta);
  EliminationTrace trace;
  trace.sample_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(kappa * 100.0 * log_term)));
  trace.threshold = kappa * 50.0 * log_term;
  const std::size_t max_rounds = std::max<std::size_t>(1, ceil_log(n));

  std::vector<ItemId> alive(v.begin(), v.end());
  std::vector<ItemId> sample(trace.sample_size);
  std::vector<char> sampled;
  while (alive.size() > trace.sample_size && trace.rounds < max_rounds) {
    std::uniform_int_distribution<std::size_t> pick(0, alive.size() - 1);
    sampled.assign(alive.size(), 0);
    for (auto& s : sample) {
      const std::size_t idx = pick(rng);
      s = alive[idx];
      sampled[idx] = 1;
    }
    std::vector<ItemId> kept;
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (sampled[i]) continue;
      if (static_cast<double>(count_score(alive[i], std::span<const ItemId>(sample), le, dir)) >=
          trace.threshold)
        kept.push_back(alive[i]);
    }
    ++trace.rounds;
    // Nothing cleared the bar: keep the previous candidates rather than
    // returning an arbitrary item.
    if (kept.empty()) {
      trace.survivors.push_back(alive.size());
      break;
    }
    alive = std::move(kept);
    trace.survivors.push_back(alive.size());
  }
  std::sort(alive.begin(), alive.end());
  alive.erase(std::unique(alive.begin(), alive.end()), alive.end());
  trace.winner = count_max(std::span<const ItemId>(alive), le, dir);
  return trace;
}

template <LessEqualOracle C>
ItemId count_max_prob(std::span<const ItemId> v, double delta, double kappa, C&& le, Direction dir,
                      Rng& rng) {
  return count_max_prob_traced(v, delta, kappa, le, dir, rng).winner;
}

/// Naive running extreme: keeps the current best and replaces it whenever the
/// oracle says the next item is at least as extreme. n-1 queries.
template <LessEqualOracle C>
ItemId sequential_scan(std::span<const ItemId> order, C&& le, Direction dir) {
  require(!order.empty(), "sequential_scan: empty set");
  ItemId best = order.front();
  for (std::size_t i = 1; i < order.size(); ++i) {
    const bool yes = le(best, order[i]);
    if (dir == Direction::Max ? yes : !yes) best = order[i];
  }
  return best;
}

inline std::vector<ItemId> all_items(std::size_t n) {
  std::vector<ItemId> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<ItemId>(i);
  return v;
}

}  // namespace noisy
