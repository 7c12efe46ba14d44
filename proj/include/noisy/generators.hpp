#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "noisy/ground_truth.hpp"

namespace noisy {

/// v_i = (1 + mu - eps)^i for i = 1..n. Each adjacent ratio sits inside the
/// (1 + mu) adversarial band, so a chain of in-band lies can walk a naive
/// running maximum all the way down to v_1.
inline GroundTruth gen_geometric_chain(std::size_t n, double mu, double eps) {
  require(n >= 2, "geometric chain: n must be at least 2");
  require(eps > 0.0 && eps < mu, "geometric chain: need 0 < eps < mu");
  std::vector<double> v(n);
  double x = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    x *= 1.0 + mu - eps;
    v[i] = x;
  }
  return GroundTruth::from_values(std::move(v));
}

inline GroundTruth gen_uniform_values(std::size_t n, std::uint64_t seed, double lo = 1.0,
                                      double hi = 1000.0) {
  require(n >= 1, "uniform values: n must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return GroundTruth::from_values(std::move(v));
}

inline GroundTruth gen_uniform_points(std::size_t n, std::size_t dim, std::uint64_t seed,
                                      double side = 100.0) {
  require(n >= 1 && dim >= 1, "uniform points: n and dim must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<double> c(n * dim);
  for (auto& x : c) x = u(rng);
  return GroundTruth::from_points(std::move(c), dim);
}

/// Blob radius used by gen_planted_clusters; every member lies within it of
/// its blob centre.
inline constexpr double kPlantedBlobRadius = 1.0;

/// k planar Gaussian blobs (sigma = radius/3, truncated at the radius) whose
/// centres sit on a circle with neighbouring centres `separation` blob radii
/// apart. Each blob gets m_min points; the remainder is spread uniformly at
/// random. Labels are the blob indices.
inline GroundTruth gen_planted_clusters(std::size_t n, std::size_t k, double separation,
                                        std::size_t m_min, std::uint64_t seed) {
  require(k >= 1, "planted clusters: k must be positive");
  require(separation > 0.0, "planted clusters: separation must be positive");
  require(k * m_min <= n, "planted clusters: k * m_min exceeds n");
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> sizes(k, m_min);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t extra = n - k * m_min; extra > 0; --extra) ++sizes[pick(rng)];

  const double r = kPlantedBlobRadius;
  const double ring =
      k == 1 ? 0.0 : separation * r / (2.0 * std::sin(std::numbers::pi / static_cast<double>(k)));
  std::normal_distribution<double> gauss(0.0, r / 3.0);

  std::vector<double> coords;
  coords.reserve(2 * n);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < k; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(k);
    const double cx = ring * std::cos(angle);
    const double cy = ring * std::sin(angle);
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      double dx = 0.0, dy = 0.0;
      do {
        dx = gauss(rng);
        dy = gauss(rng);
      } while (dx * dx + dy * dy > r * r);
      coords.push_back(cx + dx);
      coords.push_back(cy + dy);
      labels.push_back(static_cast<int>(c));
    }
  }
  // Interleave blobs so ids carry no cluster information.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<double> shuffled(2 * n);
  std::vector<int> shuffled_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    shuffled[2 * i] = coords[2 * order[i]];
    shuffled[2 * i + 1] = coords[2 * order[i] + 1];
    shuffled_labels[i] = labels[order[i]];
  }
  return GroundTruth::from_points(std::move(shuffled), 2, std::move(shuffled_labels));
}

/// The five-point line instance used throughout the worked examples:
/// s=0, u=51, v=101, w=102, t=202 (ids 0..4 in that order).
namespace line5 {
inline constexpr ItemId s = 0, u = 1, v = 2, w = 3, t = 4;
inline GroundTruth instance() {
  return GroundTruth::from_points({0.0, 51.0, 101.0, 102.0, 202.0}, 1);
}
}  // namespace line5

}  // namespace noisy
