#pragma once

// The lens region L^n_k(h, r) = D(a1, r) ∩ D(a2, r) with |a1 a2| = 2(r - h).
//
// Canonical placement: the midpoint p of the centers is the base point of
// S^n_k and the axis through the centers is e_1. Then
//
//   a1 = exp(-(r-h) e_1),  a2 = exp((r-h) e_1),
//   q1 = exp(h e_1),       q2 = exp(-h e_1),
//
// so |a_i q_i| = r and |p q_i| = h. The hyperplane H0 equidistant from the
// centers is {x_1 = 0}; the edge S0 = ∂D(a1,r) ∩ ∂D(a2,r) lies in H0.

#include <cstdint>
#include <vector>

#include "sagitta/modelspace.hpp"

namespace sagitta {

struct LensParams {
  int n;
  Curvature k;
  double h;
  double r;
  ModelPoint a1;
  ModelPoint a2;
  ModelPoint p;
  ModelPoint q1;
  ModelPoint q2;

  double center_separation() const { return 2.0 * (r - h); }
};

/// Throws InvalidArgument unless 0 < h <= r <= diam(S^n_k)/2.
LensParams make_lens(int n, Curvature k, double h, double r);

/// Membership with a 1e-12 relative slack on each distance constraint.
bool lens_contains(const LensParams& lens, const ModelPoint& x);

enum class Stratum { Interior, D1, D2, S0, Outside };
const char* to_string(Stratum s);

Stratum boundary_stratum(const LensParams& lens, const ModelPoint& x, double tol);

/// cos of the largest polar angle (about a1, measured from the direction of
/// a2) at which a point at distance t from a1 is still within r of a2.
double cap_cos_angle(const LensParams& lens, double t);

/// Volume by polar quadrature about a1 with the analytic cap cutoff.
double lens_volume_quadrature(const LensParams& lens, double tol = 1e-8);

struct MonteCarloEstimate {
  double estimate;
  double standard_error;
  std::size_t accepted;
  std::size_t samples;
};

/// Monte Carlo volume: uniform points of D(a1, r) that fall within r of a2.
MonteCarloEstimate lens_volume_mc(const LensParams& lens, std::size_t samples, std::uint64_t seed);

/// Interior wedge angle of the lens along S0; pi when h = r.
double dihedral_angle(const LensParams& lens);

/// Smallest integer strictly larger than 2 pi / dihedral_angle, and 2 when
/// h = r. Ratios within 1e-9 (relative) of an integer count as that integer.
int c_constant(const LensParams& lens);

/// A point set on the metric sphere S(base, R).
struct NetSpec {
  Curvature k;
  ModelPoint base;
  double R;
  std::vector<ModelPoint> points;
};

/// Net at the base point of S^n_k from tangent directions (rows, any length).
NetSpec make_net(Curvature k, int n, double R, const std::vector<Eigen::VectorXd>& directions);

/// The two-point net {exp(R e_1), exp(-R e_1)}.
NetSpec antipodal_net(Curvature k, int n, double R);

/// Throws InvalidArgument unless every point lies at distance R from base to
/// 1e-12 (relative to max(1, R)) and R <= diam/2.
void validate_net(const NetSpec& net);

struct NetCertificate {
  bool is_net;
  double worst_angle;  // largest sampled angle to the nearest net direction
  std::size_t directions;
};

/// Rejection-sampling certificate that the directions of the net points at
/// the base form a pi/2-net: no sampled direction farther than pi/2 + tol.
NetCertificate certify_pi2_net(const NetSpec& net, std::size_t directions = 100000,
                               double tol = 1e-6, std::uint64_t seed = 7);

/// Monte Carlo volume of the intersection of the radius-r balls about every
/// net point, sampling uniformly in D(base, r).
MonteCarloEstimate net_intersection_volume_mc(const NetSpec& net, double r, std::size_t samples,
                                              std::uint64_t seed);

}  // namespace sagitta
