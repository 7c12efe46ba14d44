#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noisy/types.hpp"

namespace noisy {

/// Hidden ground truth behind an oracle: a value per record, a Euclidean point
/// set, or an explicit distance matrix. Immutable once built; only oracles and
/// evaluators read it.
class GroundTruth {
 public:
  enum class Mode { Values, Points, Matrix };

  static constexpr double kMetricTolerance = 1e-9;

  static GroundTruth from_values(std::vector<double> values,
                                 std::optional<std::vector<int>> labels = {}) {
    GroundTruth g;
    g.mode_ = Mode::Values;
    g.n_ = values.size();
    g.data_ = std::move(values);
    g.labels_ = std::move(labels);
    g.validate();
    return g;
  }

  /// `coords` is row-major n x dim.
  static GroundTruth from_points(std::vector<double> coords, std::size_t dim,
                                 std::optional<std::vector<int>> labels = {}) {
    require(dim > 0, "points: dimension must be positive");
    require(coords.size() % dim == 0, "points: coordinate count not a multiple of dimension");
    GroundTruth g;
    g.mode_ = Mode::Points;
    g.dim_ = dim;
    g.n_ = coords.size() / dim;
    g.data_ = std::move(coords);
    g.labels_ = std::move(labels);
    g.validate();
    return g;
  }

  /// `dmat` is row-major n x n. Symmetry, zero diagonal, nonnegativity and the
  /// triangle inequality are checked to within kMetricTolerance.
  static GroundTruth from_matrix(std::vector<double> dmat, std::size_t n,
                                 std::optional<std::vector<int>> labels = {}) {
    require(dmat.size() == n * n, "matrix: expected n*n entries");
    GroundTruth g;
    g.mode_ = Mode::Matrix;
    g.n_ = n;
    g.data_ = std::move(dmat);
    g.labels_ = std::move(labels);
    g.validate();
    return g;
  }

  Mode mode() const { return mode_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  bool is_metric() const { return mode_ != Mode::Values; }

  const std::optional<std::vector<int>>& labels() const { return labels_; }
  const std::vector<int>& require_labels() const {
    require(labels_.has_value(), "ground truth carries no labels");
    return *labels_;
  }

  double value(ItemId i) const {
    require(mode_ == Mode::Values, "value() needs a Values-mode ground truth");
    return data_[i];
  }
  const std::vector<double>& values() const {
    require(mode_ == Mode::Values, "values() needs a Values-mode ground truth");
    return data_;
  }

  double coord(ItemId i, std::size_t axis) const { return data_[i * dim_ + axis]; }

  double distance(ItemId a, ItemId b) const {
    if (a == b) return 0.0;
    if (mode_ == Mode::Matrix) return data_[static_cast<std::size_t>(a) * n_ + b];
    const double* pa = &data_[static_cast<std::size_t>(a) * dim_];
    const double* pb = &data_[static_cast<std::size_t>(b) * dim_];
    if (dim_ == 2) return std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = pa[k] - pb[k];
      s += d * d;
    }
    return std::sqrt(s);
  }

 private:
  GroundTruth() = default;

  void validate() const {
    for (double x : data_) require(!std::isnan(x), "ground truth contains NaN");
    if (labels_) require(labels_->size() == n_, "label count does not match record count");
    if (mode_ != Mode::Matrix) return;
    for (std::size_t i = 0; i < n_; ++i) {
      require(std::abs(at(i, i)) <= kMetricTolerance, "matrix: nonzero diagonal");
      for (std::size_t j = 0; j < n_; ++j) {
        require(at(i, j) >= 0.0, "matrix: negative distance");
        require(std::abs(at(i, j) - at(j, i)) <= kMetricTolerance, "matrix: not symmetric");
      }
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (at(i, j) > at(i, k) + at(k, j) + kMetricTolerance)
            throw ValidationError("matrix: triangle inequality violated at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ") via " +
                                  std::to_string(k));
  }

  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  Mode mode_ = Mode::Values;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::optional<std::vector<int>> labels_;
};

inline double true_distance(const GroundTruth& g, ItemId a, ItemId b) {
  require(a < g.size() && b < g.size(), "true_distance: id out of range");
  return g.distance(a, b);
}

}  // namespace noisy
