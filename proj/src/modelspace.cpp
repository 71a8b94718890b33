#include "sagitta/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sagitta/error.hpp"
#include "sagitta/parallel.hpp"
#include "sagitta/quadrature.hpp"

namespace sagitta {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NumericalDomain: return "numerical-domain";
    case ErrorKind::InvalidPoint: return "invalid-point";
    case ErrorKind::InvalidDirection: return "invalid-direction";
    case ErrorKind::InvalidTriangle: return "invalid-triangle";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::InvalidAction: return "invalid-action";
    case ErrorKind::Connectivity: return "connectivity";
    case ErrorKind::Format: return "format";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

namespace {

constexpr double kAngleClampTolerance = 1e-9;
constexpr double kConstraintTolerance = 1e-12;
constexpr double kTangentTolerance = 1e-9;

MkValues mk_series(double k, double t) {
  const double t2 = t * t;
  const double kt2 = k * t2;
  // Horner forms of the series through t^8 (m), t^7 (m') and t^6 (m'').
  const double m = t2 * (0.5 + kt2 * (-1.0 / 24.0 + kt2 * (1.0 / 720.0 - kt2 / 40320.0)));
  const double dm = t * (1.0 + kt2 * (-1.0 / 6.0 + kt2 * (1.0 / 120.0 - kt2 / 5040.0)));
  const double ddm = 1.0 + kt2 * (-0.5 + kt2 * (1.0 / 24.0 - kt2 / 720.0));
  return {m, dm, ddm};
}

double model_scale(Curvature k) {
  return k.flat() ? 1.0 : 1.0 / std::abs(k.value());
}

void require_same_dim(const ModelPoint& p, const ModelPoint& q) {
  if (p.dim() != q.dim()) {
    fail(ErrorKind::InvalidArgument, "dimension mismatch: " + std::to_string(p.dim()) +
                                         " vs " + std::to_string(q.dim()));
  }
}

}  // namespace

Curvature::Curvature(double k) : k_(k) {
  if (!std::isfinite(k)) fail(ErrorKind::InvalidArgument, "curvature must be finite");
}

MkValues mk_family(Curvature kc, double t) {
  if (std::isnan(t)) fail(ErrorKind::InvalidArgument, "m_k evaluated at NaN");
  const double k = kc.value();
  if (std::abs(k) * t * t < kSeriesThreshold) return mk_series(k, t);
  if (k > 0.0) {
    const double s = std::sqrt(k);
    const double x = s * t;
    const double half = std::sin(0.5 * x);
    return {2.0 * half * half / k, std::sin(x) / s, std::cos(x)};
  }
  const double s = std::sqrt(-k);
  const double x = s * t;
  const double half = std::sinh(0.5 * x);
  return {2.0 * half * half / -k, std::sinh(x) / s, std::cosh(x)};
}

double mk(Curvature k, double t) { return mk_family(k, t).m; }
double mk_prime(Curvature k, double t) { return mk_family(k, t).dm; }

double mk_inverse(Curvature kc, double value) {
  if (std::isnan(value)) fail(ErrorKind::InvalidArgument, "m_k inverse of NaN");
  const double k = kc.value();
  if (value < 0.0) {
    if (value < -kAngleClampTolerance * std::max(1.0, 1.0 / std::abs(k == 0.0 ? 1.0 : k))) {
      fail(ErrorKind::NumericalDomain, "m_k inverse of negative value " + std::to_string(value));
    }
    return 0.0;
  }
  if (k == 0.0) return std::sqrt(2.0 * value);
  const double s = std::sqrt(std::abs(k));
  const double arg = std::sqrt(std::abs(k) * value / 2.0);
  if (k > 0.0) {
    if (arg > 1.0) {
      if (arg > 1.0 + kAngleClampTolerance) {
        fail(ErrorKind::NumericalDomain,
             "m_k value " + std::to_string(value) + " exceeds 2/k");
      }
      return kPi / s;
    }
    return 2.0 * std::asin(arg) / s;
  }
  return 2.0 * std::asinh(arg) / s;
}

double space_form_diameter(Curvature k) {
  return k.positive() ? kPi / std::sqrt(k.value()) : kInfinity;
}

double side_from_hinge(Curvature k, const Hinge& hinge) {
  const double a = hinge.side_a;
  const double b = hinge.side_b;
  if (!(a >= 0.0) || !(b >= 0.0)) fail(ErrorKind::InvalidArgument, "hinge sides must be >= 0");
  if (!(hinge.angle >= 0.0 && hinge.angle <= kPi * (1.0 + 1e-15))) {
    fail(ErrorKind::InvalidArgument, "hinge angle outside [0, pi]");
  }
  const double diam = space_form_diameter(k);
  if (a > diam * (1.0 + 1e-12) || b > diam * (1.0 + 1e-12)) {
    fail(ErrorKind::InvalidArgument, "hinge side exceeds the diameter of S^n_k");
  }
  // Law of cosines rewritten around the alpha = 0 configuration:
  //   m(c) = m(|a-b|) + m'(a) m'(b) (1 - cos alpha)
  // which is free of cancellation for thin triangles.
  const double half = std::sin(0.5 * hinge.angle);
  const double value =
      mk(k, std::abs(a - b)) + 2.0 * mk_prime(k, a) * mk_prime(k, b) * half * half;
  return std::min(mk_inverse(k, value), diam);
}

namespace {

// sin^2(alpha/2) of the comparison hinge, before clamping.
double half_angle_sine_squared(Curvature k, double a, double b, double c, bool* degenerate) {
  const double denom = mk_prime(k, a) * mk_prime(k, b);
  if (!(std::abs(denom) > 0.0)) {
    *degenerate = true;
    return 0.0;
  }
  *degenerate = false;
  return (mk(k, c) - mk(k, std::abs(a - b))) / (2.0 * denom);
}

}  // namespace

double comparison_angle(Curvature k, double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "comparison angle needs a, b > 0 and c >= 0");
  }
  const double diam = space_form_diameter(k);
  if (a > diam * (1.0 + 1e-12) || b > diam * (1.0 + 1e-12) || c > diam * (1.0 + 1e-12)) {
    fail(ErrorKind::InvalidTriangle, "side exceeds the diameter of S^n_k");
  }
  bool degenerate = false;
  const double s = half_angle_sine_squared(k, a, b, c, &degenerate);
  if (degenerate) return 0.0;
  // cos(alpha) = 1 - 2s, so the 1e-9 clamp band on cos is 5e-10 on s.
  const double band = 0.5 * kAngleClampTolerance;
  if (s < -band || s > 1.0 + band || std::isnan(s)) {
    fail(ErrorKind::InvalidTriangle, "sides (" + std::to_string(a) + ", " + std::to_string(b) +
                                         ", " + std::to_string(c) +
                                         ") violate the triangle inequality in S^n_k");
  }
  return 2.0 * std::asin(std::sqrt(std::clamp(s, 0.0, 1.0)));
}

double comparison_angle_clamped(Curvature k, double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0)) return 0.0;
  bool degenerate = false;
  const double s = half_angle_sine_squared(k, a, b, std::max(c, 0.0), &degenerate);
  if (degenerate || std::isnan(s)) return 0.0;
  return 2.0 * std::asin(std::sqrt(std::clamp(s, 0.0, 1.0)));
}

double model_inner(Curvature k, const AmbientVector& a, const AmbientVector& b) {
  const double dot = a.dot(b);
  return k.negative() ? dot - 2.0 * a[0] * b[0] : dot;
}

void validate_point(Curvature k, const ModelPoint& p) {
  const auto& x = p.coords();
  if (p.dim() < 2) fail(ErrorKind::InvalidPoint, "model points need dimension n >= 2");
  if (p.dim() + 1 > kMaxAmbient) fail(ErrorKind::InvalidPoint, "dimension too large");
  if (!x.allFinite()) fail(ErrorKind::InvalidPoint, "non-finite coordinate");
  if (k.flat()) {
    if (std::abs(x[0]) > kConstraintTolerance * std::max(1.0, x.norm())) {
      fail(ErrorKind::InvalidPoint, "euclidean point must have zero padding coordinate");
    }
    return;
  }
  const double target = 1.0 / k.value();  // R^2 on the sphere, -R^2 on the hyperboloid
  const double form = model_inner(k, x, x);
  const double scale = k.negative() ? std::max(std::abs(target), x[0] * x[0]) : std::abs(target);
  if (std::abs(form - target) > kConstraintTolerance * scale * 4.0) {
    fail(ErrorKind::InvalidPoint, "point violates its model constraint (residual " +
                                      std::to_string((form - target) / scale) + ")");
  }
  if (k.negative() && !(x[0] > 0.0)) {
    fail(ErrorKind::InvalidPoint, "hyperboloid point must have positive time coordinate");
  }
}

ModelPoint origin(Curvature k, int n) {
  if (n < 2 || n + 1 > kMaxAmbient) fail(ErrorKind::InvalidArgument, "unsupported dimension");
  AmbientVector x = AmbientVector::Zero(n + 1);
  if (!k.flat()) x[0] = 1.0 / std::sqrt(std::abs(k.value()));
  return ModelPoint(std::move(x));
}

ModelPoint exp_origin(Curvature k, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const int n = static_cast<int>(v.size());
  ModelPoint o = origin(k, n);
  const double t = v.norm();
  if (t == 0.0) return o;
  const MkValues f = mk_family(k, t);
  AmbientVector x = f.ddm * o.coords();
  x.tail(n) += (f.dm / t) * v;
  return ModelPoint(std::move(x));
}

double distance_unchecked(const ModelPoint& p, const ModelPoint& q, Curvature k) {
  const AmbientVector diff = p.coords() - q.coords();
  if (k.flat()) return diff.norm();
  const double radius = 1.0 / std::sqrt(std::abs(k.value()));
  if (k.positive()) {
    const AmbientVector sum = p.coords() + q.coords();
    return 2.0 * radius * std::atan2(diff.norm(), sum.norm());
  }
  const double chord2 = std::max(0.0, model_inner(k, diff, diff));
  return 2.0 * radius * std::asinh(std::sqrt(chord2) / (2.0 * radius));
}

double distance(const ModelPoint& p, const ModelPoint& q, Curvature k) {
  require_same_dim(p, q);
  validate_point(k, p);
  validate_point(k, q);
  return distance_unchecked(p, q, k);
}

ModelPoint geodesic_eval(const ModelPoint& p, const AmbientVector& dir, double t, Curvature k) {
  validate_point(k, p);
  if (dir.size() != p.coords().size()) {
    fail(ErrorKind::InvalidDirection, "direction has wrong dimension");
  }
  if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "geodesic parameter must be finite");
  const double tangency = k.flat() ? std::abs(dir[0])
                                   : std::abs(model_inner(k, dir, p.coords())) /
                                         std::sqrt(model_scale(k));
  const double norm2 = model_inner(k, dir, dir);
  if (tangency > kTangentTolerance || std::abs(norm2 - 1.0) > kTangentTolerance) {
    fail(ErrorKind::InvalidDirection, "direction must be a unit tangent vector at p");
  }
  const MkValues f = mk_family(k, t);
  return ModelPoint(f.ddm * p.coords() + f.dm * dir);
}

AmbientVector direction_to(const ModelPoint& p, const ModelPoint& q, Curvature k) {
  require_same_dim(p, q);
  const AmbientVector w = q.coords() - p.coords();
  AmbientVector v = w;
  if (!k.flat()) v -= k.value() * model_inner(k, p.coords(), w) * p.coords();
  const double norm2 = model_inner(k, v, v);
  const double scale = k.flat() ? std::max(1.0, w.norm()) : std::sqrt(model_scale(k));
  if (!(norm2 > 1e-28 * scale * scale)) {
    fail(ErrorKind::InvalidDirection, "direction undefined (coincident or antipodal points)");
  }
  return v / std::sqrt(norm2);
}

Translation::Translation(Curvature k, const ModelPoint& center) : k_(k) {
  validate_point(k, center);
  const ModelPoint o = origin(k, center.dim());
  base_ = o.coords();
  if (k.flat()) {
    shift_ = center.coords();
    identity_ = shift_.isZero(0.0);
    return;
  }
  const double d = distance_unchecked(o, center, k);
  if (d == 0.0) return;
  identity_ = false;
  axis_ = direction_to(o, center, k);
  const MkValues f = mk_family(k, d);
  cos_like_ = f.ddm;
  sin_like_ = f.dm;
}

ModelPoint Translation::apply(const ModelPoint& x) const {
  if (identity_) return x;
  if (k_.flat()) return ModelPoint(x.coords() + shift_);
  const double kv = k_.value();
  // Split x = alpha o + beta u + rest, then rotate/boost the (o, u) plane.
  const double alpha = kv * model_inner(k_, x.coords(), base_);
  const double beta = model_inner(k_, x.coords(), axis_);
  AmbientVector y = x.coords() - alpha * base_ - beta * axis_;
  y += (alpha * cos_like_ - beta * kv * sin_like_) * base_;
  y += (alpha * sin_like_ + beta * cos_like_) * axis_;
  return ModelPoint(std::move(y));
}

AmbientVector Translation::apply_vector(const AmbientVector& v) const {
  if (identity_ || k_.flat()) return v;
  const double kv = k_.value();
  const double alpha = kv * model_inner(k_, v, base_);
  const double beta = model_inner(k_, v, axis_);
  AmbientVector y = v - alpha * base_ - beta * axis_;
  y += (alpha * cos_like_ - beta * kv * sin_like_) * base_;
  y += (alpha * sin_like_ + beta * cos_like_) * axis_;
  return y;
}

ModelPoint transport_from_origin(Curvature k, const ModelPoint& center, const ModelPoint& x) {
  require_same_dim(center, x);
  return Translation(k, center).apply(x);
}

double sine_power_integral(int j, double phi) {
  if (j < 0) fail(ErrorKind::InvalidArgument, "negative power");
  const double versine = 2.0 * std::pow(std::sin(0.5 * phi), 2);
  if (j == 0) return phi;
  if (j == 1) return versine;
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  double lower = (j % 2 == 0) ? phi : versine;
  double s_pow = (j % 2 == 0) ? s : s * s;  // sin^{i-1} for the first i below
  for (int i = (j % 2 == 0) ? 2 : 3; i <= j; i += 2) {
    lower = -s_pow * c / i + (i - 1.0) / i * lower;
    s_pow *= s * s;
  }
  return lower;
}

double sinh_power_integral(int j, double x) {
  if (j < 0) fail(ErrorKind::InvalidArgument, "negative power");
  if (j == 0) return x;
  const double s = std::sinh(x);
  const double c = std::cosh(x);
  if (j == 1) {
    const double half = std::sinh(0.5 * x);
    return 2.0 * half * half;
  }
  double lower = (j % 2 == 0) ? x : 2.0 * std::pow(std::sinh(0.5 * x), 2);
  double s_pow = (j % 2 == 0) ? s : s * s;
  for (int i = (j % 2 == 0) ? 2 : 3; i <= j; i += 2) {
    lower = s_pow * c / i - (i - 1.0) / i * lower;
    s_pow *= s * s;
  }
  return lower;
}

double unit_sphere_volume(int d) {
  if (d < 0) fail(ErrorKind::InvalidArgument, "negative sphere dimension");
  const double half = 0.5 * (d + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

double space_form_volume(Curvature k, int n) {
  if (!k.positive()) fail(ErrorKind::InvalidArgument, "S^n_k is compact only for k > 0");
  return unit_sphere_volume(n) * std::pow(k.value(), -0.5 * n);
}

double radial_mass(Curvature k, int n, double t) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  const int j = n - 1;
  const double kv = k.value();
  if (std::abs(kv) * t * t < kSeriesThreshold) {
    return std::pow(t, n) / n - j * kv * std::pow(t, n + 2) / (6.0 * (n + 2));
  }
  const double s = std::sqrt(std::abs(kv));
  const double integral = kv > 0.0 ? sine_power_integral(j, s * t) : sinh_power_integral(j, s * t);
  return integral / std::pow(s, n);
}

double ball_volume(Curvature k, int n, double r) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "ball_volume needs n >= 2");
  const double diam = space_form_diameter(k);
  if (!(r > 0.0) || r > diam * (1.0 + 1e-12)) {
    fail(ErrorKind::InvalidArgument, "ball radius must lie in (0, diam S^n_k]");
  }
  r = std::min(r, diam);
  const double radial = integrate(
      [&](double t) { return std::pow(mk_prime(k, t), n - 1); }, 0.0, r);
  return unit_sphere_volume(n - 1) * radial;
}

BallSampler::BallSampler(Curvature k, int n, double r) : k_(k), n_(n), r_(r) {
  if (n < 2 || n + 1 > kMaxAmbient) fail(ErrorKind::InvalidArgument, "unsupported dimension");
  const double diam = space_form_diameter(k);
  if (!(r > 0.0) || r > diam * (1.0 + 1e-12)) {
    fail(ErrorKind::InvalidArgument, "ball radius must lie in (0, diam S^n_k]");
  }
  r_ = std::min(r, diam);
  euclidean_ = std::abs(k.value()) * r_ * r_ < kSeriesThreshold;
  total_ = radial_mass(k, n, r_);
  if (!euclidean_) {
    cdf_.resize(kCdfNodes + 1);
    for (int i = 0; i <= kCdfNodes; ++i) cdf_[i] = radial_mass(k, n, r_ * i / kCdfNodes);
  }
}

double BallSampler::sample_radius(Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  if (euclidean_) return r_ * std::pow(u, 1.0 / n_);
  // Safeguarded Newton on the closed-form CDF.
  const double target = u * total_;
  // Start from the tabulated CDF so Newton needs only a couple of steps.
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  const int cell = std::clamp(static_cast<int>(it - cdf_.begin()) - 1, 0, kCdfNodes - 1);
  const double step = r_ / kCdfNodes;
  double lo = step * cell;
  double hi = step * (cell + 1);
  double t;
  if (cell == 0) {
    t = hi * std::pow(target / cdf_[1], 1.0 / n_);
  } else {
    const double w = (target - cdf_[cell]) / (cdf_[cell + 1] - cdf_[cell]);
    t = lo + w * step;
  }
  lo = 0.0;
  hi = r_;
  for (int iter = 0; iter < 100; ++iter) {
    const double residual = radial_mass(k_, n_, t) - target;
    if (residual > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double density = std::pow(mk_prime(k_, t), n_ - 1);
    double next = density > 0.0 ? t - residual / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * r_ || hi - lo <= 1e-15 * r_) return next;
    t = next;
  }
  return t;
}

ModelPoint BallSampler::sample_at_origin(Rng& rng) const {
  std::normal_distribution<double> gauss;
  AmbientVector x = AmbientVector::Zero(n_ + 1);
  double norm2 = 0.0;
  do {
    for (int i = 1; i <= n_; ++i) x[i] = gauss(rng);
    norm2 = x.squaredNorm();
  } while (norm2 == 0.0);
  const double t = sample_radius(rng);
  const MkValues f = mk_family(k_, t);
  x *= f.dm / std::sqrt(norm2);
  if (!k_.flat()) x[0] = f.ddm / std::sqrt(std::abs(k_.value()));
  return ModelPoint(std::move(x));
}

ModelPoint BallSampler::sample(const ModelPoint& center, Rng& rng) const {
  return Translation(k_, center).apply(sample_at_origin(rng));
}

std::vector<ModelPoint> sample_uniform_ball(Curvature k, int n, const ModelPoint& center,
                                            double r, std::size_t count, std::uint64_t seed) {
  if (center.dim() != n) fail(ErrorKind::InvalidArgument, "center dimension mismatch");
  const BallSampler sampler(k, n, r);
  const Translation move(k, center);
  constexpr std::size_t kShard = 4096;
  const std::size_t shards = (count + kShard - 1) / kShard;
  std::vector<ModelPoint> out(count);
  parallel_for(shards, [&](std::size_t s) {
    Rng rng = make_rng(seed, s);
    const std::size_t end = std::min(count, (s + 1) * kShard);
    for (std::size_t i = s * kShard; i < end; ++i) out[i] = move.apply(sampler.sample_at_origin(rng));
  });
  return out;
}

}  // namespace sagitta
