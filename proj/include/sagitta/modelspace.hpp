#pragma once

// Constant-curvature model spaces S^n_k.
//
// Everything trigonometric is expressed through the distance modifying
// function m_k, the solution of y'' + k y = 1 with y(0) = y'(0) = 0:
//
//   k > 0:  m = (1 - cos(sqrt(k) t)) / k
//   k = 0:  m = t^2 / 2
//   k < 0:  m = (cosh(sqrt(-k) t) - 1) / -k
//
// With it the law of cosines in every S^n_k reads
//
//   m(c) = m(a) + m(b) - k m(a) m(b) - m'(a) m'(b) cos(alpha).
//
// Collinear points (alpha = pi) give m(a+b) = m(a) + m(b) - k m(a) m(b)
// + m'(a) m'(b). The commonly quoted "sum formula" with a minus sign on the
// m'm' term does not hold (k = 1, a = b = pi/2 gives 0 instead of m(pi) = 2);
// only the alpha = pi form is implemented and tested here.

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <vector>

#include "sagitta/rng.hpp"

namespace sagitta {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Below this value of |k| t^2 the m_k family is evaluated by its power
/// series truncated after the t^8 term.
inline constexpr double kSeriesThreshold = 1e-8;

/// Lower curvature bound k. Finite by construction.
class Curvature {
 public:
  explicit Curvature(double k);

  double value() const noexcept { return k_; }
  bool positive() const noexcept { return k_ > 0.0; }
  bool negative() const noexcept { return k_ < 0.0; }
  bool flat() const noexcept { return k_ == 0.0; }

 private:
  double k_;
};

struct MkValues {
  double m;    // m_k(t)
  double dm;   // m_k'(t)
  double ddm;  // m_k''(t)
};

MkValues mk_family(Curvature k, double t);
double mk(Curvature k, double t);
double mk_prime(Curvature k, double t);

/// Inverse of m_k on its monotone branch [0, diam S^n_k].
double mk_inverse(Curvature k, double value);

/// pi / sqrt(k) for k > 0, +infinity otherwise.
double space_form_diameter(Curvature k);

/// Two sides and the included angle.
struct Hinge {
  double side_a;
  double side_b;
  double angle;
};

/// Third side of a hinge in S^n_k.
double side_from_hinge(Curvature k, const Hinge& hinge);

/// Angle opposite side c in the model triangle with sides a, b, c.
double comparison_angle(Curvature k, double a, double b, double c);

/// As comparison_angle, but never throws: degenerate or infeasible triples are
/// clamped (0 for a collapsed hinge, pi past the widest admissible triangle).
double comparison_angle_clamped(Curvature k, double a, double b, double c);

// --------------------------------------------------------------------------
// Ambient model
//
// Points live in R^{n+1}. Index 0 is the distinguished axis: for k > 0 the
// sphere of radius 1/sqrt(k), for k < 0 the upper sheet of the hyperboloid
// <x,x>_L = -1/|k| with time coordinate x_0, and for k = 0 euclidean n-space
// embedded as x_0 = 0. The base point o of S^n_k sits on the e_0 axis (the
// euclidean origin for k = 0) and its tangent space is span(e_1, ..., e_n).

inline constexpr int kMaxAmbient = 16;
using AmbientVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;

class ModelPoint {
 public:
  ModelPoint() = default;
  explicit ModelPoint(AmbientVector coords) : coords_(std::move(coords)) {}

  int dim() const noexcept { return static_cast<int>(coords_.size()) - 1; }
  const AmbientVector& coords() const noexcept { return coords_; }

 private:
  AmbientVector coords_;
};

/// Bilinear form of the ambient model: euclidean for k >= 0, Lorentzian
/// (-x0 y0 + sum x_i y_i) for k < 0.
double model_inner(Curvature k, const AmbientVector& a, const AmbientVector& b);

/// Throws InvalidPoint unless the point satisfies its model constraint to
/// 1e-12 relative.
void validate_point(Curvature k, const ModelPoint& p);

ModelPoint origin(Curvature k, int n);

/// exp at the base point: the point at distance |v| along direction v, with
/// v given in tangent coordinates (e_1..e_n).
ModelPoint exp_origin(Curvature k, const Eigen::Ref<const Eigen::VectorXd>& v);

double distance(const ModelPoint& p, const ModelPoint& q, Curvature k);
double distance_unchecked(const ModelPoint& p, const ModelPoint& q, Curvature k);

/// Point at arc length t along the geodesic leaving p with unit tangent dir.
ModelPoint geodesic_eval(const ModelPoint& p, const AmbientVector& dir, double t,
                         Curvature k);

/// Unit tangent at p of the minimal geodesic toward q. Throws InvalidDirection
/// when q = p or q is antipodal to p.
AmbientVector direction_to(const ModelPoint& p, const ModelPoint& q, Curvature k);

/// The translation along the geodesic from the base point to center. It is an
/// isometry of S^n_k taking origin(k, n) to center.
class Translation {
 public:
  Translation(Curvature k, const ModelPoint& center);

  ModelPoint apply(const ModelPoint& x) const;
  /// Differential: carries tangent vectors at the base point to center.
  AmbientVector apply_vector(const AmbientVector& v) const;

 private:
  Curvature k_;
  AmbientVector base_;
  AmbientVector axis_;
  AmbientVector shift_;
  double cos_like_ = 1.0;  // m_k''(d)
  double sin_like_ = 0.0;  // m_k'(d)
  bool identity_ = true;
};

ModelPoint transport_from_origin(Curvature k, const ModelPoint& center,
                                 const ModelPoint& x);

/// integral_0^phi sin^j(u) du by the reduction recurrence.
double sine_power_integral(int j, double phi);

/// integral_0^x sinh^j(u) du by the reduction recurrence.
double sinh_power_integral(int j, double x);

/// Volume of the unit round sphere S^d.
double unit_sphere_volume(int d);

/// Volume of the whole space form S^n_k, k > 0.
double space_form_volume(Curvature k, int n);

/// Closed form of the radial mass integral_0^t (m_k'(s))^{n-1} ds.
double radial_mass(Curvature k, int n, double t);

/// Riemannian volume of a metric ball of radius r in S^n_k by adaptive
/// quadrature of the polar volume density.
double ball_volume(Curvature k, int n, double r);

/// Uniform sampling of a metric ball of S^n_k with respect to volume.
class BallSampler {
 public:
  BallSampler(Curvature k, int n, double r);

  /// Radius distributed with density proportional to (m_k'(t))^{n-1} on [0, r].
  double sample_radius(Rng& rng) const;

  /// Point uniform in the ball about the base point.
  ModelPoint sample_at_origin(Rng& rng) const;

  /// Point uniform in the ball about center.
  ModelPoint sample(const ModelPoint& center, Rng& rng) const;

  Curvature curvature() const noexcept { return k_; }
  int dim() const noexcept { return n_; }
  double radius() const noexcept { return r_; }

 private:
  Curvature k_;
  int n_;
  double r_;
  bool euclidean_;
  double total_;
  static constexpr int kCdfNodes = 1024;
  std::vector<double> cdf_;  // radial mass at r * i / kCdfNodes
};

std::vector<ModelPoint> sample_uniform_ball(Curvature k, int n, const ModelPoint& center,
                                            double r, std::size_t count,
                                            std::uint64_t seed);

}  // namespace sagitta
