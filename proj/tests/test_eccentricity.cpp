#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sagitta/eccentricity.hpp"
#include "sagitta/error.hpp"
#include "sagitta/spaces.hpp"
#include "test_support.hpp"

namespace sagitta {
namespace {

using test::draw;
using test::generator;

// Euclidean point cloud in the plane, as a finite metric space.
FiniteMetricSpace plane_cloud(std::size_t n, std::uint64_t seed) {
  auto g = generator(seed);
  std::vector<Eigen::Vector2d> pts(n);
  for (auto& p : pts) p = {draw(g, -1, 1), draw(g, -1, 1)};
  return FiniteMetricSpace::from_function(n, [&](std::size_t i, std::size_t j) {
    return (pts[i] - pts[j]).norm();
  });
}

// The supremum written out directly from its definition.
double reference_lambda(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q) {
  double best = -kInfinity;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == q) continue;
    best = std::max(best, (mk(k, x(p, i)) - mk(k, x(p, q))) / mk(k, x(q, i)));
  }
  return best;
}

TEST(Eccentricity, ThreePointExample) {
  // d(p,x) = d(p,q): the only ratio has a zero numerator.
  const FiniteMetricSpace x(3, {0, 1, 1, 1, 0, 1.5, 1, 1.5, 0});
  const auto e = eccentricity(x, Curvature(0.0), 0, 1);
  EXPECT_EQ(e.lambda, 0.0);
  EXPECT_EQ(e.argmax, 0u + 2u);
}

TEST(Eccentricity, MatchesDefinitionAndAnalyzer) {
  const auto x = plane_cloud(60, 3);
  for (double k : {-1.0, 0.0, 0.5}) {
    const Curvature kc(k);
    const CriticalityAnalyzer analyzer(x, kc, 0.1);
    for (std::size_t p = 0; p < 6; ++p) {
      for (std::size_t q = 0; q < x.size(); q += 7) {
        if (p == q) continue;
        const auto e = eccentricity(x, kc, p, q);
        EXPECT_DOUBLE_EQ(e.lambda, reference_lambda(x, kc, p, q));
        const auto fast = analyzer.eccentricity(p, q);
        EXPECT_EQ(fast.lambda, e.lambda);
        EXPECT_EQ(fast.argmax, e.argmax);
      }
    }
  }
}

TEST(Eccentricity, TooFewPoints) {
  const FiniteMetricSpace x(2, {0, 1, 1, 0});
  try {
    eccentricity(x, Curvature(0.0), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Eccentricity, NonPositiveExactlyAtFarthestPoints) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = plane_cloud(40, seed);
    for (std::size_t p = 0; p < x.size(); ++p) {
      const auto row = x.row(p);
      const double far = *std::max_element(row.begin(), row.end());
      for (std::size_t q = 0; q < x.size(); ++q) {
        if (q == p) continue;
        EXPECT_EQ(eccentricity(x, Curvature(-1.0), p, q).lambda <= 0.0, x(p, q) == far);
      }
    }
  }
}

TEST(Eccentricity, ScalingCovariance) {
  const auto x = plane_cloud(50, 9);
  for (double s : {0.5, 2.0}) {
    const auto y = x.scaled(s);
    for (double k : {-1.0, 0.8}) {
      for (std::size_t q = 1; q < 50; q += 5) {
        const double a = eccentricity(x, Curvature(k), 0, q).lambda;
        const double b = eccentricity(y, Curvature(k / (s * s)), 0, q).lambda;
        EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST(RLambda, Threshold) {
  EXPECT_TRUE(std::isinf(lambda_threshold(Curvature(1.0), 1.0)));
  EXPECT_EQ(lambda_threshold(Curvature(0.0), 5.0), 1.0);
  EXPECT_NEAR(lambda_threshold(Curvature(-1.0), std::log(2.0)), 0.5, 1e-15);
}

TEST(RLambda, Examples) {
  EXPECT_DOUBLE_EQ(solve_r_lambda(Curvature(0.0), 1.0, 0.5), 2.0);
  for (double k : {-1.0, 0.0, 1.0}) EXPECT_NEAR(solve_r_lambda(Curvature(k), 0.7, 0.0), 0.7, 1e-12);
  EXPECT_NEAR(solve_r_lambda(Curvature(1.0), kPi / 4, std::sqrt(0.5)), kPi / 2, 1e-11);
  EXPECT_TRUE(std::isinf(solve_r_lambda(Curvature(-1.0), std::log(2.0), 0.5)));
  EXPECT_TRUE(std::isinf(solve_r_lambda(Curvature(0.0), 1.0, 1.0)));
  try {
    solve_r_lambda(Curvature(1.0), 1.0, -1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(RLambda, RoundTripAndMonotone) {
  auto g = generator(21);
  for (int c = 0; c < 60; ++c) {
    const Curvature k(draw(g, -2.0, 2.0));
    const double h = draw(g, 0.05, k.positive() ? 0.9 * kPi / std::sqrt(k.value()) : 3.0);
    const double cap = lambda_threshold(k, h);
    const double top = std::isinf(cap) ? 10.0 : cap;
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double lambda = -1.0 + (top + 1.0) * i / 100.0;
      const double r = solve_r_lambda(k, h, lambda);
      // Independent forward map.
      const double f = mk_prime(k, r - h) / mk_prime(k, r);
      if (std::isfinite(f)) {
        EXPECT_NEAR(f, lambda, 1e-9 * std::max(1.0, std::abs(lambda)));
      }
      if (i) {
        EXPECT_GT(r, prev);
      }
      prev = r;
    }
  }
}

TEST(Criticality, ProxyMatchesDefinition) {
  // critical iff lambda <= m''(|pq|) + tau, with lambda from the written-out sup.
  const Curvature k(1.0);
  const auto x = sample_sphere(2, k, 300, 4);
  const double mesh = covering_radius_estimate(x);
  for (double f : {0.5, 2.0}) {
    const double tau = f * mesh;
    const CriticalityAnalyzer analyzer(x, k, tau);
    for (std::size_t p = 0; p < x.size(); p += 17) {
      for (std::size_t q = 0; q < x.size(); ++q) {
        if (p == q) continue;
        const bool expect = reference_lambda(x, k, p, q) <= mk_family(k, x(p, q)).ddm + tau;
        EXPECT_EQ(analyzer.is_critical(p, q), expect) << p << " " << q;
        // Monotone in tau.
        if (expect) {
          EXPECT_TRUE(is_critical(x, k, p, q, 2 * tau));
        }
      }
    }
  }
}

TEST(Criticality, ExactAntipodes) {
  const Curvature k(1.0);
  auto pts = sample_sphere(2, k, 300, 8).coordinates;
  pts[1] = ModelPoint(-pts[0].coords());
  const auto x = FiniteMetricSpace::from_function(pts.size(), [&](std::size_t i, std::size_t j) {
    return distance_unchecked(pts[i], pts[j], k);
  });
  EXPECT_NEAR(eccentricity(x, k, 0, 1).lambda, -1.0, 1e-9);
  EXPECT_TRUE(is_critical(x, k, 0, 1, 1e-6));
  EXPECT_NEAR(critical_radius(x, k, 0, 1), kPi, 1e-12);
  // A point at distance about pi/2 is not critical for small tau.
  std::size_t q = 2;
  for (std::size_t i = 2; i < x.size(); ++i)
    if (std::abs(x(0, i) - kPi / 2) < std::abs(x(0, q) - kPi / 2)) q = i;
  EXPECT_FALSE(is_critical(x, k, 0, q, 1e-3));
}

TEST(Criticality, RecordInvariants) {
  const auto x = plane_cloud(40, 5);
  const CriticalityAnalyzer analyzer(x, Curvature(-0.5), 0.05);
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      if (p == q) continue;
      const auto r = analyzer.record(p, q);
      if (std::isfinite(r.r_lambda)) {
        EXPECT_EQ(r.cri, std::max(x(p, q), r.r_lambda));
      }
      if (r.critical) {
        EXPECT_LE(r.lambda, mk_family(Curvature(-0.5), x(p, q)).ddm + r.tolerance);
      }
    }
  }
}

TEST(Candidates, EmptyOnRoundSphereAtQuarterLength) {
  const Curvature k(1.0);
  const auto x = sample_sphere(2, k, 300, 6);
  const double tau = default_tau(x);
  for (std::size_t p = 0; p < 10; ++p) {
    EXPECT_TRUE(critical_candidates(x, k, p, kPi / 2, kPi / 2, tau).empty());
  }
}

TEST(CriticalToSet, SegmentEndpoints) {
  // Points of a segment on a line; p interior sees both ends at angle 0 or pi.
  std::vector<double> t(21);
  std::iota(t.begin(), t.end(), 0.0);
  const auto x = FiniteMetricSpace::from_function(t.size(), [&](std::size_t i, std::size_t j) {
    return std::abs(t[i] - t[j]);
  });
  const std::size_t ends[] = {0, 20};
  EXPECT_TRUE(is_critical_to_set(x, Curvature(0.0), 7, ends, 1e-9));
  const std::size_t one[] = {20};
  EXPECT_FALSE(is_critical_to_set(x, Curvature(0.0), 7, one, 1e-9));
  EXPECT_THROW(is_critical_to_set(x, Curvature(0.0), 7, std::span<const std::size_t>(), 0.1), Error);
}

TEST(CriticalToSet, SinglePointOnSphereFails) {
  const Curvature k(1.0);
  const auto x = sample_sphere(2, k, 300, 7);
  std::size_t a = 1;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x(0, i) - 1.0) < std::abs(x(0, a) - 1.0)) a = i;
  const std::size_t set[] = {a};
  EXPECT_FALSE(is_critical_to_set(x, k, 0, set, 0.05));
}

TEST(Thales, EuclideanCircle) {
  auto g = generator(23);
  const Curvature k(0.0);
  const double r = 1.3, h = 0.4;
  const ModelPoint q = exp_origin(k, Eigen::Vector2d(r, 0));
  const ModelPoint p = exp_origin(k, Eigen::Vector2d(r - h, 0));
  for (int i = 0; i < 200; ++i) {
    const double a = draw(g, 0.05, 2 * kPi - 0.05);
    const ModelPoint x = exp_origin(k, Eigen::Vector2d(r * std::cos(a), r * std::sin(a)));
    EXPECT_NEAR(thales_ratio(k, p, q, x), (r - h) / r, 1e-9);
  }
  const ModelPoint p2 = exp_origin(k, Eigen::Vector2d(r - h, 0));
  EXPECT_NEAR(thales_ratio(k, p, q, p2), -1.0, 1e-12);
  EXPECT_THROW(thales_ratio(k, p, q, q), Error);
}

TEST(Thales, SphericalBoundaryValue) {
  auto g = generator(24);
  const Curvature k(1.0);
  const double r = kPi / 2, h = kPi / 4;
  const ModelPoint q = exp_origin(k, Eigen::Vector3d(r, 0, 0));
  const ModelPoint p = exp_origin(k, Eigen::Vector3d(r - h, 0, 0));
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d u = test::unit_vector(g, 3);
    if (u[0] > 0.999) continue;
    EXPECT_NEAR(thales_ratio(k, p, q, exp_origin(k, r * u)), std::sqrt(0.5), 1e-9);
    EXPECT_LT(thales_ratio(k, p, q, exp_origin(k, 0.9 * r * u)), std::sqrt(0.5));
    EXPECT_GT(thales_ratio(k, p, q, exp_origin(k, 1.1 * r * u)), std::sqrt(0.5));
  }
}

TEST(Sagitta, CrosscapAndSphere) {
  const Curvature k(1.0);
  const auto rp = sample_projective(2, k, 500, 3);
  const double mesh = covering_radius_estimate(rp);
  const CriticalityAnalyzer a(rp, k, 2 * mesh);
  const auto s = a.sagitta(kPi / 2);
  EXPECT_NEAR(s.value, kPi / 2, 2 * mesh);
  const auto ms = a.modified_sagitta(kPi / 2);
  EXPECT_LE(ms.value, s.value + mesh);
  EXPECT_GE(ms.value, kPi / 2 - 2 * mesh - 2 * mesh);

  const auto sphere = sample_sphere(2, k, 400, 3);
  EXPECT_TRUE(std::isinf(sagitta(sphere, k, kPi / 2, default_tau(sphere))));
}

TEST(Sagitta, PermutationInvariantAndMonotoneInTau) {
  const Curvature k(1.0);
  const auto x = sample_projective(2, k, 300, 5);
  const double mesh = covering_radius_estimate(x);
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto g = generator(25);
  std::shuffle(perm.begin(), perm.end(), g);
  const auto y = x.permuted(perm);
  double prev_s = kInfinity, prev_m = kInfinity;
  for (double f : {1.0, 2.0, 3.0}) {
    const double tau = f * mesh;
    const double s = sagitta(x, k, kPi / 2, tau);
    const double m = modified_sagitta(x, k, kPi / 2, tau);
    EXPECT_EQ(s, sagitta(y, k, kPi / 2, tau));
    EXPECT_EQ(m, modified_sagitta(y, k, kPi / 2, tau));
    EXPECT_LE(s, prev_s);
    EXPECT_LE(m, prev_m);
    prev_s = s;
    prev_m = m;
  }
}

TEST(Sagitta, ClaimedRadiusQualifies) {
  // Radius realized at p: h = r = rad X admits a critical candidate set.
  const Curvature k(1.0);
  const auto x = sample_projective(2, k, 300, 9);
  const double tau = default_tau(x);
  const double rad = x.radius();
  EXPECT_LE(modified_sagitta(x, k, rad, tau), rad + tau);
}

}  // namespace
}  // namespace sagitta
