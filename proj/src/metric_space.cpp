#include "sagitta/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sagitta/error.hpp"

namespace sagitta {

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> full_matrix)
    : n_(n), d_(std::move(full_matrix)) {
  if (d_.size() != n * n) fail(ErrorKind::InvalidArgument, "distance matrix has wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0) fail(ErrorKind::InvalidArgument, "nonzero diagonal entry");
    for (std::size_t j = 0; j < i; ++j) {
      const double a = d_[i * n + j];
      if (a != d_[j * n + i]) fail(ErrorKind::InvalidArgument, "distance matrix not symmetric");
      if (!(a > 0.0) || !std::isfinite(a)) {
        fail(ErrorKind::InvalidArgument, "distance between points " + std::to_string(j) +
                                             " and " + std::to_string(i) +
                                             " is not a positive finite number");
      }
    }
  }
}

double FiniteMetricSpace::diameter() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

double FiniteMetricSpace::radius() const {
  double best = kInfinity;
  for (std::size_t p = 0; p < n_; ++p) {
    const auto r = row(p);
    best = std::min(best, *std::max_element(r.begin(), r.end()));
  }
  return n_ == 0 ? 0.0 : best;
}

std::size_t FiniteMetricSpace::farthest_from(std::size_t p) const {
  const auto r = row(p);
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
  if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "scale must be positive");
  std::vector<double> m = d_;
  for (double& v : m) v *= s;
  FiniteMetricSpace out(n_, std::move(m));
  if (claimed_curvature) out.claimed_curvature = *claimed_curvature / (s * s);
  if (claimed_radius) out.claimed_radius = *claimed_radius * s;
  return out;
}

FiniteMetricSpace FiniteMetricSpace::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) fail(ErrorKind::InvalidArgument, "permutation has wrong size");
  std::vector<double> m(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m[i * n_ + j] = d_[perm[i] * n_ + perm[j]];
  }
  FiniteMetricSpace out(n_, std::move(m));
  out.claimed_curvature = claimed_curvature;
  out.claimed_radius = claimed_radius;
  if (!coordinates.empty()) {
    out.coordinates.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) out.coordinates.push_back(coordinates[perm[i]]);
  }
  return out;
}

MetricAxiomReport check_metric_axioms(const FiniteMetricSpace& x, std::size_t triples,
                                      std::uint64_t seed, bool full) {
  MetricAxiomReport report;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (x(i, i) != 0.0) report.zero_diagonal = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (x(i, j) != x(j, i)) report.symmetric = false;
      if (!(x(i, j) > 0.0)) report.positive = false;
    }
  }
  if (n < 3) return report;
  auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double lhs = x(a, c);
    const double rhs = x(a, b) + x(b, c);
    const double excess = lhs - rhs;
    report.worst_triangle_excess = std::max(report.worst_triangle_excess, excess);
    if (excess > 1e-12 * std::max(1.0, rhs)) report.triangle = false;
    ++report.triples_checked;
  };
  if (full) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) check(a, b, c);
    return report;
  }
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < triples; ++t) check(pick(rng), pick(rng), pick(rng));
  return report;
}

double covering_radius_estimate(const FiniteMetricSpace& x) {
  double mesh = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = kInfinity;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, x(i, j));
    }
    if (n > 1) mesh = std::max(mesh, nearest);
  }
  return mesh;
}

}  // namespace sagitta
