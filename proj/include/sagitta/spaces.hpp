#pragma once

// Finite samples of the model and equality-case spaces: round spheres, the
// crosscap RP^n, round lens spaces S^n / Z_m, and the glued lens and purse
// quotients of the lens region.
//
// Round quotients use the ambient coordinates of S^n_k (index 0 is the axis
// of the base point). The sphere is viewed as the join of the circle in
// coordinates (0, 1) with the sphere S0 in coordinates (2, ..., n). The
// generator psi of the Z_m action rotates the (0, 1) plane by 2 pi / m and
// the pair (2j, 2j+1) by 2 pi w_j / m.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sagitta/lens.hpp"
#include "sagitta/metric_space.hpp"
#include "sagitta/modelspace.hpp"

namespace sagitta {

enum class QuotientKind { Sphere, Projective, RoundLens, GluedLens, Purse };
const char* to_string(QuotientKind kind);

struct QuotientSpec {
  QuotientKind kind = QuotientKind::Sphere;
  int n = 3;
  Curvature k{1.0};
  int m = 1;
  // One weight per rotation block of S0; empty means all weights 1.
  std::vector<int> weights;
  // Lens parameters for the glued kinds.
  double h = 0.0;
  double r = 0.0;
};

/// Throws InvalidAction when psi is not a free action of order m, and
/// InvalidArgument for malformed specs.
void validate_spec(const QuotientSpec& spec);

/// Weights with the empty-list default expanded.
std::vector<int> effective_weights(const QuotientSpec& spec);

/// psi^power applied to an ambient point or vector of S^n_k.
AmbientVector apply_psi(const QuotientSpec& spec, const AmbientVector& x, int power = 1);

/// phi_m^power on the S0 coordinates only (indices 2..n); the (0, 1) plane is
/// left alone.
AmbientVector apply_phi(const QuotientSpec& spec, const AmbientVector& x, int power = 1);

/// Reflection across the totally geodesic hyperplane through base with the
/// given unit tangent normal. Throws InvalidDirection for a bad normal.
ModelPoint reflect(const ModelPoint& x, const AmbientVector& normal, const ModelPoint& base,
                   Curvature k);

/// Unit tangent normal at the base point along coordinate axis i (1..n).
AmbientVector coordinate_normal(Curvature k, int n, int axis);

/// N uniform points of S^n_k (k > 0) with arc-length distances.
FiniteMetricSpace sample_sphere(int n, Curvature k, std::size_t count, std::uint64_t seed);

/// The same points with the crosscap metric min(d, pi/sqrt(k) - d).
FiniteMetricSpace sample_projective(int n, Curvature k, std::size_t count, std::uint64_t seed);

/// Exact orbit-minimum distances of S^n_k / <psi>.
FiniteMetricSpace sample_round_lens(const QuotientSpec& spec, std::size_t count,
                                    std::uint64_t seed);

/// Exact quotient distance between two ambient points of S^n_k / <psi>.
double round_lens_distance(const QuotientSpec& spec, const ModelPoint& x, const ModelPoint& y);

/// vol S^n_k / m for the round kinds (m = 1 for the sphere, 2 for RP^n) and
/// the lens volume for the glued kinds, which the gluing does not change.
double quotient_volume(const QuotientSpec& spec);

/// Sampled lens region with neighbourhood edges and boundary identifications.
/// Vertex i is points()[i]; all distances are shortest-path lengths.
class GluedQuotient {
 public:
  GluedQuotient(const QuotientSpec& spec, std::size_t count, double connect_radius,
                std::uint64_t seed);

  const LensParams& lens() const noexcept { return lens_; }
  const std::vector<ModelPoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double connect_radius() const noexcept { return connect_radius_; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  std::size_t identification_count() const noexcept { return identifications_; }

  /// Single-source shortest paths.
  std::vector<double> distances_from(std::size_t source) const;

  /// All pairs. Memory is N^2 doubles; intended for moderate N.
  FiniteMetricSpace to_metric_space() const;

  /// Image of a boundary point under the gluing map (R_H0 o phi_m on D2 and
  /// its inverse on D1 for the glued lens, R_P for the purse).
  ModelPoint glue_image(const ModelPoint& x) const;

 private:
  ModelPoint glue_face(const ModelPoint& x, int face) const;
  void add_edge(std::size_t a, std::size_t b, double w,
                std::vector<std::vector<std::pair<std::size_t, double>>>& adj) const;

  QuotientSpec spec_;
  LensParams lens_;
  double connect_radius_;
  std::vector<ModelPoint> points_;
  // Compressed adjacency.
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
  std::size_t identifications_ = 0;
};

/// Suggested connect radius: twice the expected covering radius of N uniform
/// points in the lens region.
double suggested_connect_radius(const QuotientSpec& spec, std::size_t count);

FiniteMetricSpace glued_quotient_metric(const QuotientSpec& spec, std::size_t count,
                                        double connect_radius, std::uint64_t seed);

}  // namespace sagitta
