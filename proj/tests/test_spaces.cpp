#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sagitta/error.hpp"
#include "sagitta/spaces.hpp"
#include "test_support.hpp"

namespace sagitta {
namespace {

using test::draw;
using test::generator;

QuotientSpec round_lens(int n, int m, std::vector<int> weights = {}) {
  QuotientSpec s;
  s.kind = QuotientKind::RoundLens;
  s.n = n;
  s.m = m;
  s.weights = std::move(weights);
  return s;
}

QuotientSpec glued(QuotientKind kind, int m, double h) {
  QuotientSpec s;
  s.kind = kind;
  s.n = 3;
  s.m = m;
  s.h = h;
  s.r = kPi / 2;
  return s;
}

ModelPoint random_sphere_point(std::mt19937_64& g, int n) {
  return ModelPoint(test::unit_vector(g, n + 1));
}

TEST(Sphere, GeodesicDistanceLaw) {
  // On S^2 the distance to a fixed point has CDF (1 - cos t) / 2.
  const auto x = sample_sphere(2, Curvature(1.0), 2001, 11);
  std::vector<double> d(x.row(0).begin() + 1, x.row(0).end());
  std::sort(d.begin(), d.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double f = 0.5 * (1.0 - std::cos(d[i]));
    ks = std::max({ks, std::abs(f - double(i) / d.size()), std::abs(f - double(i + 1) / d.size())});
  }
  // 1% critical value for n = 2000 is about 1.63 / sqrt(n).
  EXPECT_LT(ks, 1.63 / std::sqrt(2000.0));
}

TEST(Sphere, DeterministicAndMetric) {
  const auto a = sample_sphere(3, Curvature(4.0), 300, 12);
  const auto b = sample_sphere(3, Curvature(4.0), 300, 12);
  EXPECT_EQ(a.matrix(), b.matrix());
  EXPECT_NE(a.matrix(), sample_sphere(3, Curvature(4.0), 300, 13).matrix());
  EXPECT_TRUE(check_metric_axioms(a).ok());
  EXPECT_LE(a.diameter(), kPi / 2 + 1e-12);
  EXPECT_THROW(sample_sphere(3, Curvature(-1.0), 10, 1), Error);
}

TEST(Projective, BoundedByQuarterCircle) {
  const Curvature k(1.0);
  const auto s = sample_sphere(3, k, 300, 14);
  const auto p = sample_projective(3, k, 300, 14);
  EXPECT_TRUE(check_metric_axioms(p, 0, true).ok());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      EXPECT_LE(p(i, j), kPi / 2 + 1e-12);
      EXPECT_LE(p(i, j), s(i, j) + 1e-15);
    }
  }
  ASSERT_TRUE(p.claimed_radius.has_value());
  EXPECT_DOUBLE_EQ(*p.claimed_radius, kPi / 2);
}

TEST(RoundLens, SmallOrdersReduceToKnownSpaces) {
  const auto s = sample_sphere(3, Curvature(1.0), 200, 15);
  const auto l1 = sample_round_lens(round_lens(3, 1), 200, 15);
  const auto l2 = sample_round_lens(round_lens(3, 2), 200, 15);
  const auto p = sample_projective(3, Curvature(1.0), 200, 15);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_NEAR(l1(i, j), s(i, j), 1e-12);
      EXPECT_NEAR(l2(i, j), p(i, j), 1e-7);
    }
  }
  // m = 2 on an even-dimensional sphere is the antipodal map as well.
  QuotientSpec even = round_lens(2, 2);
  const auto e = sample_round_lens(even, 150, 16);
  const auto pe = sample_projective(2, Curvature(1.0), 150, 16);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) EXPECT_NEAR(e(i, j), pe(i, j), 1e-7);
}

TEST(RoundLens, InvalidActions) {
  const auto kind_of = [](const QuotientSpec& s) {
    try {
      validate_spec(s);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Usage;  // sentinel: no error
  };
  EXPECT_EQ(kind_of(round_lens(3, 4, {2})), ErrorKind::InvalidAction);
  EXPECT_EQ(kind_of(round_lens(4, 3)), ErrorKind::InvalidAction);
  EXPECT_EQ(kind_of(round_lens(5, 6, {1, 3})), ErrorKind::InvalidAction);
  EXPECT_EQ(kind_of(round_lens(5, 5, {1, 2})), ErrorKind::Usage);
  EXPECT_EQ(kind_of(round_lens(5, 5, {1})), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of(round_lens(3, 0)), ErrorKind::InvalidArgument);
}

TEST(RoundLens, PsiIsAFreeIsometryOfOrderM) {
  auto g = generator(17);
  for (int m : {2, 3, 5, 7}) {
    const auto spec = round_lens(5, m, {1, m - 1});
    validate_spec(spec);
    for (int t = 0; t < 50; ++t) {
      const auto x = random_sphere_point(g, 5);
      const auto y = random_sphere_point(g, 5);
      const ModelPoint px(apply_psi(spec, x.coords()));
      const ModelPoint py(apply_psi(spec, y.coords()));
      EXPECT_NEAR(distance(px, py, spec.k), distance(x, y, spec.k), 1e-12);
      EXPECT_LT((apply_psi(spec, x.coords(), m) - x.coords()).norm(), 1e-12);
      for (int j = 1; j < m; ++j) EXPECT_GT((apply_psi(spec, x.coords(), j) - x.coords()).norm(), 1e-6);
      // The quotient distance is orbit invariant and bounded by the parent.
      EXPECT_NEAR(round_lens_distance(spec, px, y), round_lens_distance(spec, x, y), 1e-12);
      EXPECT_LE(round_lens_distance(spec, x, y), distance(x, y, spec.k) + 1e-15);
      EXPECT_LE(round_lens_distance(spec, x, y), kPi / 2 + 1e-12);
    }
  }
}

TEST(RoundLens, QuotientIsAMetric) {
  const auto l = sample_round_lens(round_lens(3, 5, {2}), 150, 18);
  EXPECT_TRUE(check_metric_axioms(l, 0, true).ok());
  EXPECT_DOUBLE_EQ(quotient_volume(round_lens(3, 5)), 2 * kPi * kPi / 5);
}

TEST(Reflect, InvolutiveIsometryFixingTheHyperplane) {
  auto g = generator(19);
  for (double kv : {-1.0, 0.0, 2.0}) {
    const Curvature k(kv);
    const int n = 3;
    const ModelPoint base = origin(k, n);
    const AmbientVector nu = coordinate_normal(k, n, 2);
    for (int t = 0; t < 40; ++t) {
      const ModelPoint x = exp_origin(k, Eigen::Vector3d(draw(g, -1, 1), draw(g, -1, 1), draw(g, -1, 1)));
      const ModelPoint y = exp_origin(k, Eigen::Vector3d(draw(g, -1, 1), draw(g, -1, 1), draw(g, -1, 1)));
      const ModelPoint rx = reflect(x, nu, base, k);
      EXPECT_LT((reflect(rx, nu, base, k).coords() - x.coords()).norm(), 1e-12);
      EXPECT_NEAR(distance(rx, reflect(y, nu, base, k), k), distance(x, y, k), 1e-10);
      // Points of the hyperplane x_2 = 0 stay put.
      const ModelPoint h = exp_origin(k, Eigen::Vector3d(draw(g, -1, 1), 0.0, draw(g, -1, 1)));
      EXPECT_LT((reflect(h, nu, base, k).coords() - h.coords()).norm(), 1e-12);
    }
    AmbientVector bad = nu * 2.0;
    EXPECT_THROW(reflect(base, bad, base, k), Error);
  }
}

TEST(Glued, UpperBoundsTheRoundLensDistance) {
  // The glued lens with r = pi/2, h = pi/m is the round lens space L(m; 1).
  const int m = 3;
  const auto spec = glued(QuotientKind::GluedLens, m, kPi / m);
  const double rho = suggested_connect_radius(spec, 1500);
  const GluedQuotient gq(spec, 1500, rho, 20);
  EXPECT_GT(gq.identification_count(), 0u);
  const auto ref = round_lens(3, m);
  std::vector<double> gaps;
  for (std::size_t s = 0; s < 10; ++s) {
    const auto d = gq.distances_from(s * 97);
    for (std::size_t j = 0; j < gq.size(); j += 13) {
      const double exact = round_lens_distance(ref, gq.points()[s * 97], gq.points()[j]);
      gaps.push_back(d[j] - exact);
      EXPECT_GE(d[j], exact - 1e-9);
    }
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  EXPECT_LT(gaps[gaps.size() / 2], rho);
}

TEST(Glued, GlueMapsFacesOntoFaces) {
  auto g = generator(21);
  const auto spec = glued(QuotientKind::GluedLens, 5, kPi / 5);
  const GluedQuotient gq(spec, 200, 0.8, 22);
  const auto& lens = gq.lens();
  for (int t = 0; t < 30; ++t) {
    // A point of D2: on the sphere about a2, inside the ball about a1.
    ModelPoint x;
    do {
      const AmbientVector dir = direction_to(lens.a2, ModelPoint(test::unit_vector(g, 4)), spec.k);
      x = geodesic_eval(lens.a2, dir, lens.r, spec.k);
    } while (distance(x, lens.a1, spec.k) > lens.r);
    const ModelPoint y = gq.glue_image(x);
    EXPECT_NEAR(distance(y, lens.a1, spec.k), lens.r, 1e-9);
    EXPECT_LE(distance(y, lens.a2, spec.k), lens.r + 1e-9);
  }
}

TEST(Glued, PurseMirrorPairsAreClose) {
  const auto spec = glued(QuotientKind::Purse, 1, 1.0);
  const double rho = suggested_connect_radius(spec, 800);
  const GluedQuotient gq(spec, 800, rho, 23);
  const auto& lens = gq.lens();
  const AmbientVector nu = coordinate_normal(spec.k, 3, 2);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < gq.size() && checked < 20; ++i) {
    const ModelPoint& x = gq.points()[i];
    if (std::abs(distance(x, lens.a2, spec.k) - lens.r) > 0.25 * rho) continue;
    const ModelPoint mirror = reflect(x, nu, lens.p, spec.k);
    std::size_t j = 0;
    for (std::size_t t = 1; t < gq.size(); ++t)
      if (distance(mirror, gq.points()[t], spec.k) < distance(mirror, gq.points()[j], spec.k)) j = t;
    EXPECT_LT(gq.distances_from(i)[j], 2 * rho);
    ++checked;
  }
  EXPECT_GT(checked, 5u);
}

TEST(Glued, MetricSpaceAndConnectivity) {
  const auto spec = glued(QuotientKind::GluedLens, 3, kPi / 3);
  const auto x = glued_quotient_metric(spec, 300, suggested_connect_radius(spec, 300), 24);
  EXPECT_EQ(x.size(), 300u);
  EXPECT_TRUE(check_metric_axioms(x, 20000).ok());
  try {
    GluedQuotient(spec, 300, 1e-3, 24);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Connectivity);
  }
  EXPECT_THROW(GluedQuotient(round_lens(3, 3), 100, 0.5, 1), Error);
}

TEST(Glued, VolumeIsTheLensVolume) {
  const auto spec = glued(QuotientKind::GluedLens, 4, kPi / 4);
  EXPECT_NEAR(quotient_volume(spec), 2 * kPi * kPi / 4, 1e-8);
}

}  // namespace
}  // namespace sagitta
