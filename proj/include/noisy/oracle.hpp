#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noisy/ground_truth.hpp"

namespace noisy {

enum class NoiseKind { None, Adversarial, Probabilistic };
enum class AdversaryStrategy { Pessimistic, RandomInBand };

/// Noise model of a simulated oracle. `mu` only matters for Adversarial, `p`
/// only for Probabilistic. `seed` drives every random answer the oracle gives
/// and is independent of any algorithm seed.
struct NoiseParams {
  NoiseKind kind = NoiseKind::None;
  double mu = 0.0;
  double p = 0.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  AdversaryStrategy adversary = AdversaryStrategy::Pessimistic;

  void validate() const {
    require(mu >= 0.0, "noise: mu must be nonnegative");
    require(p >= 0.0 && p < 0.5, "noise: p must lie in [0, 0.5)");
    require(delta > 0.0 && delta < 1.0, "noise: delta must lie in (0, 1)");
  }

  static NoiseParams exact() { return {}; }
  static NoiseParams adversarial(double mu, std::uint64_t seed = 0,
                                 AdversaryStrategy s = AdversaryStrategy::Pessimistic) {
    NoiseParams np;
    np.kind = NoiseKind::Adversarial;
    np.mu = mu;
    np.seed = seed;
    np.adversary = s;
    return np;
  }
  static NoiseParams probabilistic(double p, std::uint64_t seed) {
    NoiseParams np;
    np.kind = NoiseKind::Probabilistic;
    np.p = p;
    np.seed = seed;
    return np;
  }
};

/// Asks whether d(a,b) <= d(c,d).
struct QuadQuery {
  ItemId a, b, c, d;
};

struct ItemPair {
  ItemId lo, hi;
  auto operator<=>(const ItemPair&) const = default;
};

/// Orientation-free form of a comparison. `first <= second` lexicographically;
/// `swapped` records whether the caller's first pair was the larger one. Value
/// comparisons use degenerate pairs (i,i).
struct CanonicalKey {
  ItemPair first, second;
  bool swapped = false;

  bool identical() const { return first == second; }
  bool operator==(const CanonicalKey& o) const { return first == o.first && second == o.second; }
};

inline CanonicalKey canonicalize(const QuadQuery& q) {
  const ItemPair p1{std::min(q.a, q.b), std::max(q.a, q.b)};
  const ItemPair p2{std::min(q.c, q.d), std::max(q.c, q.d)};
  if (p2 < p1) return {p2, p1, true};
  return {p1, p2, false};
}

inline CanonicalKey canonicalize_values(ItemId i, ItemId j) {
  return canonicalize({i, i, j, j});
}

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const {
    std::uint64_t h = (std::uint64_t{k.first.lo} << 32) | k.first.hi;
    h ^= ((std::uint64_t{k.second.lo} << 32) | k.second.hi) * 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0,1) as a pure function of (seed, salt, key).
inline double key_uniform(std::uint64_t seed, std::uint64_t salt, const CanonicalKey& k) {
  std::uint64_t h = splitmix64(seed ^ salt);
  h = splitmix64(h ^ ((std::uint64_t{k.first.lo} << 32) | k.first.hi));
  h = splitmix64(h ^ ((std::uint64_t{k.second.lo} << 32) | k.second.hi));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}
}  // namespace detail

/// Raised when an interactive session cannot obtain a usable answer.
class OracleAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counts oracle invocations and optionally keeps a transcript of
/// (canonical key, canonical answer).
class QueryLedger {
 public:
  struct Entry {
    CanonicalKey key;
    bool answer;
  };

  std::uint64_t count() const { return count_; }
  void reset() {
    count_ = 0;
    transcript_.clear();
  }
  void set_recording(bool on) { recording_ = on; }
  const std::vector<Entry>& transcript() const { return transcript_; }

  void record(const CanonicalKey& k, bool canonical_answer) {
    ++count_;
    if (recording_) transcript_.push_back({k, canonical_answer});
  }

 private:
  std::uint64_t count_ = 0;
  bool recording_ = false;
  std::vector<Entry> transcript_;
};

/// Comparison and quadruplet oracle over a hidden ground truth.
///
/// Answers are persistent: every kind derives the answer for a canonical key
/// deterministically, and the caller's orientation only decides whether that
/// answer is negated. Exact ties are answered Yes in canonical orientation.
/// Under the adversarial model a comparison is forced truthful whenever the
/// larger quantity exceeds (1+mu) times the smaller; inside the band the
/// configured strategy picks the answer.
class Oracle {
 public:
  Oracle(std::shared_ptr<const GroundTruth> truth, NoiseParams noise)
      : truth_(std::move(truth)), noise_(noise) {
    require(truth_ != nullptr, "oracle needs a ground truth");
    noise_.validate();
  }
  Oracle(const GroundTruth& truth, NoiseParams noise)
      : Oracle(std::make_shared<const GroundTruth>(truth), noise) {}

  /// Human-in-the-loop oracle. Prompts go to `out`, `y`/`n` replies come from
  /// `in`; every canonical key is asked at most once.
  static Oracle interactive(std::istream& in, std::ostream& out,
                            std::vector<std::string> descriptors = {}) {
    Oracle o;
    o.session_ = std::make_shared<Session>(Session{&in, &out, std::move(descriptors), {}, 0});
    return o;
  }

  const NoiseParams& noise() const { return noise_; }
  bool is_interactive() const { return session_ != nullptr; }
  const GroundTruth* ground_truth() const { return truth_.get(); }

  /// Yes (true) iff the oracle claims value(i) <= value(j).
  bool compare_values(ItemId i, ItemId j) {
    require(session_ || truth_->mode() == GroundTruth::Mode::Values,
            "compare_values needs a Values-mode ground truth");
    const CanonicalKey key = canonicalize_values(i, j);
    if (key.identical()) return finish(key, true);
    const auto q = [&](ItemId id) { return truth_->value(id); };
    const bool canon = session_ ? ask(key, false) : decide(key, q(key.first.lo), q(key.second.lo));
    return finish(key, canon);
  }

  /// Yes (true) iff the oracle claims d(a,b) <= d(c,d).
  bool compare_distances(ItemId a, ItemId b, ItemId c, ItemId d) {
    require(session_ || truth_->is_metric(), "compare_distances needs a metric ground truth");
    const CanonicalKey key = canonicalize({a, b, c, d});
    if (key.identical()) return finish(key, true);
    const bool canon =
        session_ ? ask(key, true)
                 : decide(key, truth_->distance(key.first.lo, key.first.hi),
                          truth_->distance(key.second.lo, key.second.hi));
    return finish(key, canon);
  }
  bool compare_distances(const QuadQuery& q) { return compare_distances(q.a, q.b, q.c, q.d); }

  std::uint64_t ledger_read() const { return ledger_.count(); }
  void ledger_reset() { ledger_.reset(); }
  QueryLedger& ledger() { return ledger_; }
  const QueryLedger& ledger() const { return ledger_; }

  /// Pins the canonical-orientation answer for `key`. The noise model still
  /// has the last word: an adversarial oracle ignores pins outside the band,
  /// and the exact oracle ignores them entirely.
  void pin(const CanonicalKey& key, bool canonical_answer) {
    pins_[key] = canonical_answer;
  }
  /// Pins the answer as seen from the caller's orientation of `q`.
  void pin(const QuadQuery& q, bool answer) {
    const CanonicalKey k = canonicalize(q);
    pin(k, k.swapped ? !answer : answer);
  }
  void clear_pins() { pins_.clear(); }

  /// Whether two compared quantities fall inside the adversarial band. Equal
  /// quantities are in-band; zero against a positive quantity is not.
  bool in_band(double x, double y) const {
    if (x == y) return true;
    const double lo = std::min(x, y), hi = std::max(x, y);
    if (lo <= 0.0) return false;
    return hi <= (1.0 + noise_.mu) * lo;
  }

 private:
  struct Session {
    std::istream* in;
    std::ostream* out;
    std::vector<std::string> descriptors;
    std::unordered_map<CanonicalKey, bool, CanonicalKeyHash> memo;
    std::uint64_t prompts;
  };

  Oracle() = default;

  bool finish(const CanonicalKey& key, bool canonical_answer) {
    ledger_.record(key, canonical_answer);
    if (key.identical()) return true;
    return key.swapped ? !canonical_answer : canonical_answer;
  }

  bool decide(const CanonicalKey& key, double x, double y) const {
    const bool truthful = x <= y;
    const auto pinned = [&]() -> std::optional<bool> {
      if (pins_.empty()) return std::nullopt;
      auto it = pins_.find(key);
      if (it == pins_.end()) return std::nullopt;
      return it->second;
    }();
    switch (noise_.kind) {
      case NoiseKind::None:
        return truthful;
      case NoiseKind::Adversarial: {
        if (!in_band(x, y)) return truthful;
        if (pinned) return *pinned;
        if (x == y) return true;
        if (noise_.adversary == AdversaryStrategy::Pessimistic) return !truthful;
        return detail::key_uniform(noise_.seed, kCoinSalt, key) < 0.5;
      }
      case NoiseKind::Probabilistic: {
        if (pinned) return *pinned;
        const bool flip = detail::key_uniform(noise_.seed, kFlipSalt, key) < noise_.p;
        return flip ? !truthful : truthful;
      }
    }
    return truthful;
  }

  std::string describe(ItemId id) const {
    if (id < session_->descriptors.size()) return session_->descriptors[id];
    return std::to_string(id);
  }

  bool ask(const CanonicalKey& key, bool distances) {
    auto& s = *session_;
    if (auto it = s.memo.find(key); it != s.memo.end()) return it->second;
    const std::uint64_t id = ++s.prompts;
    for (int attempt = 0; attempt < 3; ++attempt) {
      if (distances) {
        *s.out << "Q " << id << ": is d(" << describe(key.first.lo) << ',' << describe(key.first.hi)
               << ") <= d(" << describe(key.second.lo) << ',' << describe(key.second.hi)
               << ") ? [y/n]\n";
      } else {
        *s.out << "Q " << id << ": is v(" << describe(key.first.lo) << ") <= v("
               << describe(key.second.lo) << ") ? [y/n]\n";
      }
      s.out->flush();
      std::string reply;
      if (!std::getline(*s.in, reply)) break;
      reply.erase(std::remove_if(reply.begin(), reply.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  reply.end());
      if (reply == "y" || reply == "n") {
        const bool yes = reply == "y";
        s.memo.emplace(key, yes);
        return yes;
      }
    }
    throw OracleAborted("interactive oracle: no valid reply for query " + std::to_string(id));
  }

  static constexpr std::uint64_t kFlipSalt = 0x7f4a7c15f39cc060ULL;
  static constexpr std::uint64_t kCoinSalt = 0x2545f4914f6cdd1dULL;

  std::shared_ptr<const GroundTruth> truth_;
  NoiseParams noise_;
  QueryLedger ledger_;
  std::unordered_map<CanonicalKey, bool, CanonicalKeyHash> pins_;
  std::shared_ptr<Session> session_;
};

}  // namespace noisy
