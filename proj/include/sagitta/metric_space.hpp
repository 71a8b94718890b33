#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sagitta/modelspace.hpp"

namespace sagitta {

/// N points with a dense symmetric distance matrix: the discrete stand-in for
/// a sampled manifold.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  /// Takes the full row-major N x N matrix. Throws InvalidArgument unless it is
  /// symmetric with zero diagonal and strictly positive finite off-diagonal.
  FiniteMetricSpace(std::size_t n, std::vector<double> full_matrix);

  template <class F>
  static FiniteMetricSpace from_function(std::size_t n, F&& dist) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double d = dist(i, j);
        m[i * n + j] = d;
        m[j * n + i] = d;
      }
    }
    return FiniteMetricSpace(n, std::move(m));
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {d_.data() + i * n_, n_};
  }
  const std::vector<double>& matrix() const noexcept { return d_; }

  /// Optional per-point ambient coordinates (empty when unknown).
  std::vector<ModelPoint> coordinates;
  std::optional<double> claimed_curvature;
  std::optional<double> claimed_radius;

  double diameter() const;
  /// min over p of max over x of d(p, x).
  double radius() const;
  /// Index of a point farthest from p (lowest index on ties).
  std::size_t farthest_from(std::size_t p) const;

  /// Copy with all distances multiplied by s.
  FiniteMetricSpace scaled(double s) const;
  /// Copy with points reordered: result point i is this point perm[i].
  FiniteMetricSpace permuted(std::span<const std::size_t> perm) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct MetricAxiomReport {
  bool symmetric = true;
  bool zero_diagonal = true;
  bool positive = true;
  bool triangle = true;
  std::size_t triples_checked = 0;
  double worst_triangle_excess = 0.0;

  bool ok() const { return symmetric && zero_diagonal && positive && triangle; }
};

/// Checks the metric axioms, the triangle inequality on `triples` random
/// triples (or all of them when full is set) with relative slack 1e-12.
MetricAxiomReport check_metric_axioms(const FiniteMetricSpace& x, std::size_t triples = 10000,
                                      std::uint64_t seed = 1, bool full = false);

/// Mesh of the sample: the largest nearest-neighbour distance. Used as the
/// covering radius estimate behind default tolerances.
double covering_radius_estimate(const FiniteMetricSpace& x);

}  // namespace sagitta
