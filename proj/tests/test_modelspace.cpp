#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "sagitta/error.hpp"
#include "sagitta/modelspace.hpp"
#include "test_support.hpp"

namespace sagitta {
namespace {

using test::draw;
using test::generator;

// m_k straight from its definition, in long double.
long double reference_m(long double k, long double t) {
  if (k > 0) return (1 - std::cos(std::sqrt(k) * t)) / k;
  if (k < 0) return (std::cosh(std::sqrt(-k) * t) - 1) / -k;
  return t * t / 2;
}

TEST(Mk, MatchesDefinition) {
  auto g = generator(11);
  for (double k : {-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0}) {
    for (int i = 0; i < 200; ++i) {
      const double t_max = k > 0 ? kPi / std::sqrt(k) : 4.0;
      const double t = draw(g, 1e-3, t_max);
      const double expect = static_cast<double>(reference_m(k, t));
      EXPECT_NEAR(mk(Curvature(k), t), expect, 1e-13 * std::max(1.0, expect)) << k << " " << t;
    }
  }
}

TEST(Mk, SeriesBranchIsContinuous) {
  for (double k : {-1.0, 1.0}) {
    const double t = std::sqrt(kSeriesThreshold / std::abs(k));
    const auto below = mk_family(Curvature(k), std::nextafter(t, 0.0));
    const auto above = mk_family(Curvature(k), std::nextafter(t, 1.0));
    EXPECT_NEAR(below.m, above.m, 1e-15 * above.m + 1e-30);
    EXPECT_NEAR(below.dm, above.dm, 1e-15 * above.dm);
    EXPECT_NEAR(below.ddm, above.ddm, 1e-15);
  }
  // Tiny curvature stays close to the euclidean values.
  EXPECT_NEAR(mk(Curvature(1e-8), 1.0), 0.5, 1e-9);
}

TEST(Mk, IdentitiesHoldOnRandomInputs) {
  auto g = generator(12);
  for (int i = 0; i < 5000; ++i) {
    const double k = draw(g, -3.0, 3.0);
    const double t = draw(g, 0.0, k > 0 ? kPi / std::sqrt(k) : 6.0);
    const auto f = mk_family(Curvature(k), t);
    const double ode = std::abs(f.ddm + k * f.m - 1.0) / std::max({1.0, std::abs(f.ddm), std::abs(k * f.m)});
    const double rhs = f.m * (1.0 + f.ddm);
    const double pyth = std::abs(f.dm * f.dm - rhs) / std::max({1.0, f.dm * f.dm, rhs});
    EXPECT_LE(ode, 1e-12) << k << " " << t;
    EXPECT_LE(pyth, 1e-12) << k << " " << t;
  }
}

TEST(Mk, CollinearSumFormula) {
  // m(pi) = 2 for k = 1 from a = b = pi/2.
  const Curvature k(1.0);
  const double a = kPi / 2;
  const auto f = mk_family(k, a);
  EXPECT_NEAR(f.m + f.m - f.m * f.m + f.dm * f.dm, 2.0, 1e-15);
  EXPECT_NEAR(mk(k, kPi), 2.0, 1e-15);
  // The variant with -m'(a)m'(b) gives 0, not m(pi).
  EXPECT_NEAR(f.m + f.m - f.m * f.m - f.dm * f.dm, 0.0, 1e-15);
}

TEST(Mk, InverseRoundTrip) {
  auto g = generator(13);
  for (double k : {-1.5, 0.0, 0.7}) {
    for (int i = 0; i < 200; ++i) {
      const double t = draw(g, 0.0, k > 0 ? kPi / std::sqrt(k) : 5.0);
      EXPECT_NEAR(mk_inverse(Curvature(k), mk(Curvature(k), t)), t, 1e-7 * std::max(1.0, t));
    }
  }
  EXPECT_THROW(mk_inverse(Curvature(1.0), 2.5), Error);
}

TEST(LawOfCosines, SideMatchesTextbookFormulas) {
  auto g = generator(14);
  for (int i = 0; i < 1000; ++i) {
    const double a = draw(g, 0.05, 1.5);
    const double b = draw(g, 0.05, 1.5);
    const double alpha = draw(g, 0.05, kPi - 0.05);
    const double sph = std::acos(std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(alpha));
    const double hyp = std::acosh(std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(alpha));
    const double euc = std::sqrt(a * a + b * b - 2 * a * b * std::cos(alpha));
    EXPECT_NEAR(side_from_hinge(Curvature(1.0), {a, b, alpha}), sph, 1e-10);
    EXPECT_NEAR(side_from_hinge(Curvature(-1.0), {a, b, alpha}), hyp, 1e-10);
    EXPECT_NEAR(side_from_hinge(Curvature(0.0), {a, b, alpha}), euc, 1e-10);
  }
}

TEST(LawOfCosines, AngleRoundTrip) {
  auto g = generator(15);
  for (int i = 0; i < 2000; ++i) {
    const double k = draw(g, -2.0, 2.0);
    const double cap = k > 0 ? 0.49 * kPi / std::sqrt(k) : 3.0;
    const double a = draw(g, 0.01, cap);
    const double b = draw(g, 0.01, cap);
    const double alpha = draw(g, 0.01, kPi - 0.01);
    const double c = side_from_hinge(Curvature(k), {a, b, alpha});
    EXPECT_NEAR(comparison_angle(Curvature(k), a, b, c), alpha, 1e-6) << k << " " << a << " " << b;
  }
}

TEST(LawOfCosines, DegenerateAndInvalidTriangles) {
  const Curvature k(1.0);
  EXPECT_NEAR(comparison_angle(k, 1.0, 1.0, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(comparison_angle(k, 1.0, 0.5, 1.5), kPi, 1e-7);
  try {
    comparison_angle(k, 0.2, 0.2, 1.0);
    FAIL() << "expected an invalid-triangle error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTriangle);
  }
  EXPECT_EQ(comparison_angle_clamped(k, 0.2, 0.2, 1.0), kPi);
}

TEST(Ambient, ExpAndDistance) {
  auto g = generator(16);
  for (double k : {-1.0, 0.0, 1.0, 4.0}) {
    for (int n : {2, 3, 5}) {
      const Curvature kc(k);
      for (int i = 0; i < 100; ++i) {
        const double cap = k > 0 ? 0.99 * kPi / std::sqrt(k) : 3.0;
        const Eigen::VectorXd v = test::tangent(g, n, draw(g, 0.0, cap));
        const Eigen::VectorXd w = test::tangent(g, n, draw(g, 0.0, cap));
        const ModelPoint x = exp_origin(kc, v);
        const ModelPoint y = exp_origin(kc, w);
        validate_point(kc, x);
        EXPECT_NEAR(distance(origin(kc, n), x, kc), v.norm(), 1e-12 * std::max(1.0, v.norm()));
        EXPECT_NEAR(distance(x, y, kc), test::textbook_distance(x, y, k), 1e-7);
      }
    }
  }
}

TEST(Ambient, InvalidPointsAreRejected) {
  const Curvature k(1.0);
  AmbientVector bad = AmbientVector::Zero(4);
  bad[0] = 2.0;
  try {
    validate_point(k, ModelPoint(bad));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPoint);
  }
  EXPECT_THROW(distance(origin(k, 2), origin(k, 3), k), Error);
}

TEST(Ambient, GeodesicAndDirection) {
  auto g = generator(17);
  for (double k : {-1.0, 0.0, 1.0}) {
    const Curvature kc(k);
    for (int i = 0; i < 100; ++i) {
      const ModelPoint p = exp_origin(kc, test::tangent(g, 3, draw(g, 0.0, 1.2)));
      const ModelPoint q = exp_origin(kc, test::tangent(g, 3, draw(g, 0.0, 1.2)));
      const double d = distance(p, q, kc);
      if (d < 1e-3) continue;
      const AmbientVector u = direction_to(p, q, kc);
      const ModelPoint end = geodesic_eval(p, u, d, kc);
      EXPECT_NEAR(distance(end, q, kc), 0.0, 1e-7);
      const ModelPoint mid = geodesic_eval(p, u, 0.5 * d, kc);
      EXPECT_NEAR(distance(p, mid, kc), 0.5 * d, 1e-9);
      EXPECT_NEAR(distance(mid, q, kc), 0.5 * d, 1e-9);
    }
  }
  EXPECT_THROW(direction_to(origin(Curvature(1.0), 2), origin(Curvature(1.0), 2), Curvature(1.0)), Error);
}

TEST(Ambient, TranslationIsAnIsometry) {
  auto g = generator(18);
  for (double k : {-1.0, 0.0, 2.0}) {
    const Curvature kc(k);
    for (int i = 0; i < 50; ++i) {
      const ModelPoint c = exp_origin(kc, test::tangent(g, 3, draw(g, 0.0, 1.0)));
      const Translation t(kc, c);
      EXPECT_NEAR(distance(t.apply(origin(kc, 3)), c, kc), 0.0, 1e-7);
      const ModelPoint x = exp_origin(kc, test::tangent(g, 3, draw(g, 0.0, 1.0)));
      const ModelPoint y = exp_origin(kc, test::tangent(g, 3, draw(g, 0.0, 1.0)));
      EXPECT_NEAR(distance(t.apply(x), t.apply(y), kc), distance(x, y, kc), 1e-9);
      // The differential carries unit tangents at o to unit tangents at c.
      AmbientVector v = AmbientVector::Zero(4);
      v.tail(3) = test::unit_vector(g, 3);
      const AmbientVector w = t.apply_vector(v);
      EXPECT_NEAR(model_inner(kc, w, w), 1.0, 1e-12);
      if (kc.flat()) {
        EXPECT_EQ(w[0], 0.0);
      } else {
        EXPECT_NEAR(model_inner(kc, w, c.coords()), 0.0, 1e-12);
      }
    }
  }
}

TEST(Volume, BallVolumeClosedForms) {
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, b); };
  for (double r : {0.1, 0.7, 1.3}) {
    EXPECT_TRUE(close(ball_volume(Curvature(0.0), 2, r), kPi * r * r));
    EXPECT_TRUE(close(ball_volume(Curvature(0.0), 3, r), 4.0 / 3.0 * kPi * r * r * r));
    EXPECT_TRUE(close(ball_volume(Curvature(1.0), 2, r), 2 * kPi * (1 - std::cos(r))));
    EXPECT_TRUE(close(ball_volume(Curvature(-1.0), 2, r), 2 * kPi * (std::cosh(r) - 1)));
    EXPECT_TRUE(close(ball_volume(Curvature(1.0), 3, r), kPi * (2 * r - std::sin(2 * r))));
    EXPECT_TRUE(close(ball_volume(Curvature(-1.0), 3, r), kPi * (std::sinh(2 * r) - 2 * r)));
  }
  EXPECT_NEAR(space_form_volume(Curvature(1.0), 3), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(space_form_volume(Curvature(4.0), 3), 2 * kPi * kPi / 8, 1e-12);
  EXPECT_NEAR(unit_sphere_volume(2), 4 * kPi, 1e-12);
}

TEST(Volume, RadialMassAgainstSimpson) {
  for (double k : {-2.0, -0.5, 0.3, 1.0}) {
    for (int n : {2, 3, 4, 7}) {
      const double t = k > 0 ? 0.9 * kPi / std::sqrt(k) : 2.0;
      const Curvature kc(k);
      const double ref = test::simpson([&](double s) { return std::pow(mk_prime(kc, s), n - 1); }, 0, t);
      EXPECT_NEAR(radial_mass(kc, n, t), ref, 1e-10 * std::max(1.0, ref)) << k << " " << n;
    }
  }
}

TEST(Volume, SinePowerIntegral) {
  for (int j = 0; j <= 6; ++j) {
    for (double phi : {0.0, 0.3, 1.5, 3.0, kPi}) {
      const double ref = test::simpson([&](double u) { return std::pow(std::sin(u), j); }, 0, phi);
      EXPECT_NEAR(sine_power_integral(j, phi), ref, 1e-12) << j << " " << phi;
    }
  }
}

TEST(Sampling, FractionInInnerBallMatchesVolumeRatio) {
  for (double k : {-1.0, 0.0, 1.0}) {
    const Curvature kc(k);
    const int n = 3;
    const double r = 1.2;
    const auto pts = sample_uniform_ball(kc, n, origin(kc, n), r, 40000, 5);
    const double p = ball_volume(kc, n, 0.5 * r) / ball_volume(kc, n, r);
    std::size_t inside = 0;
    for (const auto& x : pts) {
      const double d = distance(origin(kc, n), x, kc);
      ASSERT_LE(d, r * (1 + 1e-12));
      if (d <= 0.5 * r) ++inside;
    }
    const double f = static_cast<double>(inside) / pts.size();
    EXPECT_NEAR(f, p, 4.0 * std::sqrt(p * (1 - p) / pts.size())) << k;
  }
}

TEST(Sampling, DeterministicAcrossThreadCounts) {
  const Curvature k(-1.0);
  const ModelPoint c = exp_origin(k, Eigen::Vector3d(0.3, -0.2, 0.5));
  setenv("SAGITTA_THREADS", "1", 1);
  const auto a = sample_uniform_ball(k, 3, c, 0.8, 10000, 99);
  setenv("SAGITTA_THREADS", "3", 1);
  const auto b = sample_uniform_ball(k, 3, c, 0.8, 10000, 99);
  unsetenv("SAGITTA_THREADS");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i].coords() == b[i].coords());
}

}  // namespace
}  // namespace sagitta
