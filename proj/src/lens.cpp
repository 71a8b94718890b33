#include "sagitta/lens.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sagitta/error.hpp"
#include "sagitta/parallel.hpp"

namespace sagitta {

namespace {

constexpr double kSlack = 1e-12;
constexpr std::size_t kShard = 1 << 16;

ModelPoint axis_point(Curvature k, int n, double s) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[0] = s;
  return exp_origin(k, v);
}

void require_dim(const LensParams& lens, const ModelPoint& x) {
  if (x.dim() != lens.n) {
    fail(ErrorKind::InvalidArgument, "point of dimension " + std::to_string(x.dim()) +
                                         " tested against a lens in dimension " +
                                         std::to_string(lens.n));
  }
}

// Sums per-shard acceptance counts; the shard layout depends only on the
// sample count, so the result is independent of the thread count.
template <class Accept>
MonteCarloEstimate ball_monte_carlo(const BallSampler& sampler, const ModelPoint& center,
                                    std::size_t samples, std::uint64_t seed, Accept&& accept) {
  const Translation move(sampler.curvature(), center);
  const std::size_t shards = (samples + kShard - 1) / kShard;
  std::vector<std::size_t> hits(shards, 0);
  parallel_for(shards, [&](std::size_t s) {
    Rng rng = make_rng(seed, s);
    const std::size_t count = std::min(samples, (s + 1) * kShard) - s * kShard;
    std::size_t local = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (accept(move.apply(sampler.sample_at_origin(rng)))) ++local;
    }
    hits[s] = local;
  });
  std::size_t accepted = 0;
  for (std::size_t h : hits) accepted += h;
  const double volume = ball_volume(sampler.curvature(), sampler.dim(), sampler.radius());
  const double frac = static_cast<double>(accepted) / static_cast<double>(samples);
  return {volume * frac, volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples)),
          accepted, samples};
}

}  // namespace

const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::Interior: return "interior";
    case Stratum::D1: return "D1";
    case Stratum::D2: return "D2";
    case Stratum::S0: return "S0";
    case Stratum::Outside: return "outside";
  }
  return "unknown";
}

LensParams make_lens(int n, Curvature k, double h, double r) {
  const double half_diam = 0.5 * space_form_diameter(k);
  if (!(h > 0.0) || !(h <= r) || !(r <= half_diam * (1.0 + kSlack))) {
    fail(ErrorKind::InvalidArgument, "lens needs 0 < h <= r <= diam/2 (h = " +
                                         std::to_string(h) + ", r = " + std::to_string(r) + ")");
  }
  r = std::min(r, half_diam);
  h = std::min(h, r);
  const double offset = r - h;
  return {n,
          k,
          h,
          r,
          axis_point(k, n, -offset),
          axis_point(k, n, offset),
          origin(k, n),
          axis_point(k, n, h),
          axis_point(k, n, -h)};
}

bool lens_contains(const LensParams& lens, const ModelPoint& x) {
  require_dim(lens, x);
  const double limit = lens.r * (1.0 + kSlack);
  return distance(x, lens.a1, lens.k) <= limit && distance(x, lens.a2, lens.k) <= limit;
}

Stratum boundary_stratum(const LensParams& lens, const ModelPoint& x, double tol) {
  require_dim(lens, x);
  const double d1 = distance(x, lens.a1, lens.k);
  const double d2 = distance(x, lens.a2, lens.k);
  if (d1 > lens.r + tol || d2 > lens.r + tol) return Stratum::Outside;
  const bool on1 = std::abs(d1 - lens.r) <= tol;
  const bool on2 = std::abs(d2 - lens.r) <= tol;
  if (on1 && on2) return Stratum::S0;
  if (on1) return Stratum::D1;
  if (on2) return Stratum::D2;
  return Stratum::Interior;
}

double cap_cos_angle(const LensParams& lens, double t) {
  const double sep = lens.center_separation();
  if (t == 0.0 || sep == 0.0) return 1.0;
  if (t < 0.0 || t > lens.r * (1.0 + kSlack)) {
    fail(ErrorKind::InvalidArgument, "cap angle needs 0 <= t <= r");
  }
  const Curvature k = lens.k;
  // Law of cosines about a1 in half-angle form:
  //   m(d) = m(|t - D|) + 2 m'(t) m'(D) sin^2(phi/2) <= m(r).
  const double cos_star = 1.0 - (mk(k, lens.r) - mk(k, std::abs(t - sep))) /
                                    (mk_prime(k, t) * mk_prime(k, sep));
  return std::clamp(cos_star, -1.0, 1.0);
}

double lens_volume_quadrature(const LensParams& lens, double tol) {
  const Curvature k = lens.k;
  const int n = lens.n;
  const double r = lens.r;
  const double sep = lens.center_separation();
  if (sep == 0.0) return ball_volume(k, n, r);

  const double shell = unit_sphere_volume(n - 2);
  // phi* = pi (whole sphere) for t <= r - D and phi* = 0 (empty) for t <= D - r.
  const double full_until = std::max(0.0, r - sep);
  const double empty_until = std::max(0.0, sep - r);
  const double start = std::max(full_until, empty_until);

  double volume = 0.0;
  if (full_until > 0.0) volume += unit_sphere_volume(n - 1) * radial_mass(k, n, full_until);

  auto integrand = [&](double t) {
    const double phi = std::acos(cap_cos_angle(lens, t));
    return std::pow(mk_prime(k, t), n - 1) * sine_power_integral(n - 2, phi);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double part = integrator.integrate(integrand, start, r, tol * 1e-2, &error, &l1);
  if (!std::isfinite(part) || error > tol * std::max(std::abs(part), 1e-300) * 10.0) {
    fail(ErrorKind::NumericalDomain, "lens quadrature did not converge");
  }
  volume += shell * part;
  return volume;
}

MonteCarloEstimate lens_volume_mc(const LensParams& lens, std::size_t samples,
                                  std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::InvalidArgument, "Monte Carlo needs samples");
  const BallSampler sampler(lens.k, lens.n, lens.r);
  const double limit = lens.r * (1.0 + kSlack);
  return ball_monte_carlo(sampler, lens.a1, samples, seed, [&](const ModelPoint& x) {
    return distance_unchecked(x, lens.a2, lens.k) <= limit;
  });
}

double dihedral_angle(const LensParams& lens) {
  if (lens.h >= lens.r) return kPi;
  return kPi - comparison_angle(lens.k, lens.r, lens.r, lens.center_separation());
}

int c_constant(const LensParams& lens) {
  if (lens.h >= lens.r) return 2;
  const double ratio = 2.0 * kPi / dihedral_angle(lens);
  return static_cast<int>(std::floor(ratio * (1.0 + 1e-9))) + 1;
}

NetSpec make_net(Curvature k, int n, double R, const std::vector<Eigen::VectorXd>& directions) {
  if (directions.empty()) fail(ErrorKind::InvalidArgument, "a net needs at least one point");
  if (!(R > 0.0) || R > 0.5 * space_form_diameter(k) * (1.0 + kSlack)) {
    fail(ErrorKind::InvalidArgument, "net radius must lie in (0, diam/2]");
  }
  NetSpec net{k, origin(k, n), R, {}};
  for (const auto& d : directions) {
    if (d.size() != n) fail(ErrorKind::InvalidArgument, "net direction has wrong dimension");
    const double norm = d.norm();
    if (!(norm > 0.0)) fail(ErrorKind::InvalidArgument, "net direction must be nonzero");
    net.points.push_back(exp_origin(k, (R / norm) * d));
  }
  return net;
}

NetSpec antipodal_net(Curvature k, int n, double R) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[0] = 1.0;
  return make_net(k, n, R, {e, -e});
}

void validate_net(const NetSpec& net) {
  if (net.points.empty()) fail(ErrorKind::InvalidArgument, "empty net");
  if (!(net.R > 0.0) || net.R > 0.5 * space_form_diameter(net.k) * (1.0 + kSlack)) {
    fail(ErrorKind::InvalidArgument, "net radius must lie in (0, diam/2]");
  }
  for (const auto& c : net.points) {
    if (std::abs(distance(net.base, c, net.k) - net.R) > 1e-12 * std::max(1.0, net.R)) {
      fail(ErrorKind::InvalidArgument, "net point off the sphere S(base, R)");
    }
  }
}

NetCertificate certify_pi2_net(const NetSpec& net, std::size_t directions, double tol,
                               std::uint64_t seed) {
  validate_net(net);
  const int n = net.base.dim();
  std::vector<AmbientVector> dirs;
  dirs.reserve(net.points.size());
  for (const auto& c : net.points) dirs.push_back(direction_to(net.base, c, net.k));
  const Translation move(net.k, net.base);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  AmbientVector u = AmbientVector::Zero(n + 1);
  for (std::size_t s = 0; s < directions; ++s) {
    double norm2 = 0.0;
    do {
      for (int i = 1; i <= n; ++i) u[i] = gauss(rng);
      norm2 = u.squaredNorm();
    } while (norm2 == 0.0);
    const AmbientVector v = move.apply_vector(u / std::sqrt(norm2));
    double best = -1.0;
    for (const auto& w : dirs) best = std::max(best, model_inner(net.k, v, w));
    worst = std::max(worst, std::acos(std::clamp(best, -1.0, 1.0)));
  }
  return {worst <= 0.5 * kPi + tol, worst, directions};
}

MonteCarloEstimate net_intersection_volume_mc(const NetSpec& net, double r, std::size_t samples,
                                              std::uint64_t seed) {
  if (net.points.empty()) fail(ErrorKind::InvalidArgument, "empty net");
  if (samples == 0) fail(ErrorKind::InvalidArgument, "Monte Carlo needs samples");
  const BallSampler sampler(net.k, net.base.dim(), r);
  const double limit = r * (1.0 + kSlack);
  return ball_monte_carlo(sampler, net.base, samples, seed, [&](const ModelPoint& x) {
    for (const auto& c : net.points) {
      if (distance_unchecked(x, c, net.k) > limit) return false;
    }
    return true;
  });
}

}  // namespace sagitta
