#include "sagitta/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "sagitta/error.hpp"
#include "sagitta/parallel.hpp"

namespace sagitta {

namespace {

constexpr std::size_t kShard = 4096;

bool round_kind(QuotientKind kind) {
  return kind == QuotientKind::Sphere || kind == QuotientKind::Projective ||
         kind == QuotientKind::RoundLens;
}

int block_count(int n) { return (n - 1) / 2; }

void rotate(AmbientVector& x, int i, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double a = x[i];
  const double b = x[i + 1];
  x[i] = c * a - s * b;
  x[i + 1] = s * a + c * b;
}

std::vector<ModelPoint> sphere_points(int n, Curvature k, std::size_t count, std::uint64_t seed) {
  if (!k.positive()) fail(ErrorKind::InvalidArgument, "round quotients need k > 0");
  if (n < 2) fail(ErrorKind::InvalidArgument, "dimension must be at least 2");
  if (count < 10) fail(ErrorKind::InvalidArgument, "need at least 10 points");
  const double radius = 1.0 / std::sqrt(k.value());
  std::vector<ModelPoint> points(count);
  const std::size_t shards = (count + kShard - 1) / kShard;
  parallel_for(shards, [&](std::size_t s) {
    Rng rng = make_rng(seed, s);
    std::normal_distribution<double> gauss;
    const std::size_t end = std::min(count, (s + 1) * kShard);
    for (std::size_t i = s * kShard; i < end; ++i) {
      AmbientVector x(n + 1);
      double norm2 = 0.0;
      do {
        for (int c = 0; c <= n; ++c) x[c] = gauss(rng);
        norm2 = x.squaredNorm();
      } while (norm2 == 0.0);
      points[i] = ModelPoint(x * (radius / std::sqrt(norm2)));
    }
  });
  return points;
}

template <class Dist>
FiniteMetricSpace build_space(const std::vector<ModelPoint>& points, Dist&& dist) {
  const std::size_t n = points.size();
  std::vector<double> m(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) m[i * n + j] = dist(points[i], points[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m[j * n + i] = m[i * n + j];
  FiniteMetricSpace out(n, std::move(m));
  out.coordinates = points;
  return out;
}

}  // namespace

const char* to_string(QuotientKind kind) {
  switch (kind) {
    case QuotientKind::Sphere: return "sphere";
    case QuotientKind::Projective: return "projective";
    case QuotientKind::RoundLens: return "round_lens";
    case QuotientKind::GluedLens: return "glued_lens";
    case QuotientKind::Purse: return "purse";
  }
  return "unknown";
}

std::vector<int> effective_weights(const QuotientSpec& spec) {
  if (!spec.weights.empty()) return spec.weights;
  return std::vector<int>(static_cast<std::size_t>(block_count(spec.n)), 1);
}

void validate_spec(const QuotientSpec& spec) {
  if (spec.n < 2) fail(ErrorKind::InvalidArgument, "dimension must be at least 2");
  if (spec.m < 1) fail(ErrorKind::InvalidArgument, "order m must be at least 1");
  if (round_kind(spec.kind) && !spec.k.positive()) {
    fail(ErrorKind::InvalidArgument, "round quotients need k > 0");
  }
  const auto w = effective_weights(spec);
  if (static_cast<int>(w.size()) != block_count(spec.n)) {
    fail(ErrorKind::InvalidArgument, "expected " + std::to_string(block_count(spec.n)) +
                                         " weights for n = " + std::to_string(spec.n));
  }
  // An odd leftover S0 coordinate only admits the identity and -1.
  if (spec.n % 2 == 0 && spec.m > 2) {
    fail(ErrorKind::InvalidAction, "no free Z_" + std::to_string(spec.m) +
                                       " action of this form on an even-dimensional sphere");
  }
  if (spec.kind == QuotientKind::RoundLens) {
    for (int wi : w) {
      if (std::gcd(wi, spec.m) != 1) {
        fail(ErrorKind::InvalidAction, "weight " + std::to_string(wi) +
                                           " is not coprime to m = " + std::to_string(spec.m) +
                                           "; the action has fixed points");
      }
    }
  }
  if (spec.kind == QuotientKind::GluedLens || spec.kind == QuotientKind::Purse) {
    make_lens(spec.n, spec.k, spec.h, spec.r);
  }
}

AmbientVector apply_phi(const QuotientSpec& spec, const AmbientVector& x, int power) {
  AmbientVector y = x;
  const auto w = effective_weights(spec);
  for (int b = 0; b < block_count(spec.n); ++b) {
    rotate(y, 2 + 2 * b, 2.0 * kPi * w[b] * power / spec.m);
  }
  if (spec.n % 2 == 0 && spec.m == 2 && power % 2 != 0) y[spec.n] = -y[spec.n];
  return y;
}

AmbientVector apply_psi(const QuotientSpec& spec, const AmbientVector& x, int power) {
  AmbientVector y = apply_phi(spec, x, power);
  rotate(y, 0, 2.0 * kPi * power / spec.m);
  return y;
}

AmbientVector coordinate_normal(Curvature, int n, int axis) {
  if (axis < 1 || axis > n) fail(ErrorKind::InvalidArgument, "axis out of range");
  AmbientVector v = AmbientVector::Zero(n + 1);
  v[axis] = 1.0;
  return v;
}

ModelPoint reflect(const ModelPoint& x, const AmbientVector& normal, const ModelPoint& base,
                   Curvature k) {
  const auto& b = base.coords();
  if (normal.size() != b.size() || x.coords().size() != b.size()) {
    fail(ErrorKind::InvalidArgument, "dimension mismatch in reflection");
  }
  const double scale = std::max(1.0, b.norm());
  const double tangential = k.flat() ? normal[0] : model_inner(k, normal, b) / scale;
  if (std::abs(tangential) > 1e-9 || std::abs(model_inner(k, normal, normal) - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidDirection, "reflection normal must be a unit tangent vector at base");
  }
  // For k != 0 the hyperplane passes through the ambient origin; for k = 0 it
  // passes through base.
  const double s = k.flat() ? model_inner(k, x.coords() - b, normal)
                            : model_inner(k, x.coords(), normal);
  return ModelPoint(x.coords() - 2.0 * s * normal);
}

FiniteMetricSpace sample_sphere(int n, Curvature k, std::size_t count, std::uint64_t seed) {
  auto out = build_space(sphere_points(n, k, count, seed),
                         [k](const ModelPoint& a, const ModelPoint& b) {
                           return distance_unchecked(a, b, k);
                         });
  out.claimed_curvature = k.value();
  return out;
}

FiniteMetricSpace sample_projective(int n, Curvature k, std::size_t count, std::uint64_t seed) {
  const double diam = space_form_diameter(k);
  auto out = build_space(sphere_points(n, k, count, seed),
                         [k, diam](const ModelPoint& a, const ModelPoint& b) {
                           const double d = distance_unchecked(a, b, k);
                           return std::min(d, diam - d);
                         });
  out.claimed_curvature = k.value();
  out.claimed_radius = 0.5 * diam;
  return out;
}

double round_lens_distance(const QuotientSpec& spec, const ModelPoint& x, const ModelPoint& y) {
  double best = distance_unchecked(x, y, spec.k);
  for (int j = 1; j < spec.m; ++j) {
    best = std::min(best, distance_unchecked(x, ModelPoint(apply_psi(spec, y.coords(), j)),
                                             spec.k));
  }
  return best;
}

FiniteMetricSpace sample_round_lens(const QuotientSpec& spec, std::size_t count,
                                    std::uint64_t seed) {
  if (spec.kind != QuotientKind::RoundLens) {
    fail(ErrorKind::InvalidArgument, "sample_round_lens needs a round_lens spec");
  }
  validate_spec(spec);
  const auto points = sphere_points(spec.n, spec.k, count, seed);
  // Orbits are precomputed so each pair costs m distance evaluations.
  const std::size_t m = static_cast<std::size_t>(spec.m);
  std::vector<ModelPoint> orbit(points.size() * m);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      orbit[i * m + j] = ModelPoint(apply_psi(spec, points[i].coords(), static_cast<int>(j)));
    }
  }
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) {
      double best = kInfinity;
      for (std::size_t t = 0; t < m; ++t) {
        best = std::min(best, distance_unchecked(points[i], orbit[j * m + t], spec.k));
      }
      d[i * n + j] = best;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d[j * n + i] = d[i * n + j];
  FiniteMetricSpace out(n, std::move(d));
  out.coordinates = points;
  out.claimed_curvature = spec.k.value();
  return out;
}

double quotient_volume(const QuotientSpec& spec) {
  switch (spec.kind) {
    case QuotientKind::Sphere: return space_form_volume(spec.k, spec.n);
    case QuotientKind::Projective: return 0.5 * space_form_volume(spec.k, spec.n);
    case QuotientKind::RoundLens: return space_form_volume(spec.k, spec.n) / spec.m;
    case QuotientKind::GluedLens:
    case QuotientKind::Purse:
      return lens_volume_quadrature(make_lens(spec.n, spec.k, spec.h, spec.r));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

GluedQuotient::GluedQuotient(const QuotientSpec& spec, std::size_t count, double connect_radius,
                             std::uint64_t seed)
    : spec_(spec),
      lens_(make_lens(spec.n, spec.k, spec.h, spec.r)),
      connect_radius_(connect_radius) {
  if (spec.kind != QuotientKind::GluedLens && spec.kind != QuotientKind::Purse) {
    fail(ErrorKind::InvalidArgument, "glued quotient needs a glued_lens or purse spec");
  }
  validate_spec(spec);
  if (!(connect_radius > 0.0)) fail(ErrorKind::InvalidArgument, "connect radius must be positive");
  if (count < 2) fail(ErrorKind::InvalidArgument, "need at least 2 points");
  const Curvature k = spec.k;
  const double r = lens_.r;

  // Rejection sampling from D(a1, r), shard by shard so the sample depends
  // only on the seed.
  const BallSampler sampler(k, spec.n, r);
  const Translation move(k, lens_.a1);
  points_.reserve(count);
  for (std::size_t s = 0; points_.size() < count; ++s) {
    if (s > (std::size_t{1} << 24)) fail(ErrorKind::NumericalDomain, "lens acceptance too small");
    Rng rng = make_rng(seed, s);
    for (std::size_t i = 0; i < kShard && points_.size() < count; ++i) {
      ModelPoint x = move.apply(sampler.sample_at_origin(rng));
      if (distance_unchecked(x, lens_.a2, k) <= r) points_.push_back(std::move(x));
    }
  }

  const std::size_t n = points_.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  // <x - y, x - y> = 2 m_k(|xy|) in every model, so the radius test needs no
  // inverse trig.
  const double chord2 = 2.0 * mk(k, connect_radius);
  std::vector<std::vector<std::pair<std::size_t, double>>> lower(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& xi = points_[i].coords();
    for (std::size_t j = 0; j < i; ++j) {
      const AmbientVector diff = xi - points_[j].coords();
      if (model_inner(k, diff, diff) <= chord2) {
        lower[i].emplace_back(j, distance_unchecked(points_[i], points_[j], k));
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : lower[i]) add_edge(i, j, w, adj);
  }

  // Identification edges. A point within tol of a face is first pushed
  // radially onto that face; the edge then runs to the sample nearest the
  // glued image, weighted by the length of that detour. Every edge weight is
  // therefore an upper bound for the quotient distance of its endpoints.
  const double tol = 0.5 * connect_radius;
  std::vector<std::vector<std::pair<std::size_t, double>>> glue(n);
  parallel_for(n, [&](std::size_t i) {
    const ModelPoint& x = points_[i];
    for (int face = 1; face <= 2; ++face) {
      const ModelPoint& center = face == 1 ? lens_.a1 : lens_.a2;
      const double d = distance_unchecked(x, center, k);
      if (d < r - tol) continue;
      const ModelPoint foot = geodesic_eval(center, direction_to(center, x, k), r, k);
      const ModelPoint image = glue_face(foot, face);
      std::size_t best = i;
      double best_d = kInfinity;
      for (std::size_t j = 0; j < n; ++j) {
        const double dj = distance_unchecked(image, points_[j], k);
        if (dj < best_d) {
          best_d = dj;
          best = j;
        }
      }
      if (best != i) glue[i].emplace_back(best, std::abs(r - d) + best_d);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : glue[i]) {
      add_edge(i, j, w, adj);
      ++identifications_;
    }
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    offsets_[i + 1] = offsets_[i] + adj[i].size();
  }
  targets_.reserve(offsets_[n]);
  weights_.reserve(offsets_[n]);
  for (const auto& list : adj) {
    for (const auto& [j, w] : list) {
      targets_.push_back(j);
      weights_.push_back(w);
    }
  }

  const auto reach = distances_from(0);
  const auto reached = static_cast<std::size_t>(
      std::count_if(reach.begin(), reach.end(), [](double d) { return d < kInfinity; }));
  if (reached != n) {
    fail(ErrorKind::Connectivity,
         "neighbourhood graph is disconnected: " + std::to_string(reached) + " of " +
             std::to_string(n) + " vertices reachable from vertex 0 at connect radius " +
             std::to_string(connect_radius) + "; increase the radius or the sample size");
  }
}

void GluedQuotient::add_edge(std::size_t a, std::size_t b, double w,
                             std::vector<std::vector<std::pair<std::size_t, double>>>& adj) const {
  adj[a].emplace_back(b, w);
  adj[b].emplace_back(a, w);
}

std::vector<double> GluedQuotient::distances_from(std::size_t source) const {
  const std::size_t n = points_.size();
  if (source >= n) fail(ErrorKind::InvalidArgument, "source vertex out of range");
  std::vector<double> dist(n, kInfinity);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (std::size_t e = offsets_[v]; e < offsets_[v + 1]; ++e) {
      const double nd = d + weights_[e];
      if (nd < dist[targets_[e]]) {
        dist[targets_[e]] = nd;
        queue.emplace(nd, targets_[e]);
      }
    }
  }
  return dist;
}

FiniteMetricSpace GluedQuotient::to_metric_space() const {
  const std::size_t n = points_.size();
  std::vector<double> d(n * n);
  parallel_for(n, [&](std::size_t i) {
    const auto row = distances_from(i);
    std::copy(row.begin(), row.end(), d.begin() + static_cast<std::ptrdiff_t>(i * n));
  });
  // Opposite searches may round differently; both are upper bounds.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = std::min(d[i * n + j], d[j * n + i]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  FiniteMetricSpace out(n, std::move(d));
  out.coordinates = points_;
  out.claimed_curvature = spec_.k.value();
  return out;
}

ModelPoint GluedQuotient::glue_face(const ModelPoint& x, int face) const {
  const Curvature k = spec_.k;
  if (spec_.kind == QuotientKind::Purse) {
    return reflect(x, coordinate_normal(k, spec_.n, 2), lens_.p, k);
  }
  const AmbientVector h0 = coordinate_normal(k, spec_.n, 1);
  if (face == 2) return reflect(ModelPoint(apply_phi(spec_, x.coords(), 1)), h0, lens_.p, k);
  return ModelPoint(apply_phi(spec_, reflect(x, h0, lens_.p, k).coords(), -1));
}

ModelPoint GluedQuotient::glue_image(const ModelPoint& x) const {
  const double d1 = distance_unchecked(x, lens_.a1, spec_.k);
  const double d2 = distance_unchecked(x, lens_.a2, spec_.k);
  return glue_face(x, d2 >= d1 ? 2 : 1);
}

double suggested_connect_radius(const QuotientSpec& spec, std::size_t count) {
  const double volume = lens_volume_quadrature(make_lens(spec.n, spec.k, spec.h, spec.r));
  const double n = spec.n;
  const double unit_ball = std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  const double cells = static_cast<double>(count);
  return 2.0 * std::pow(volume * std::log(cells) / (cells * unit_ball), 1.0 / n);
}

FiniteMetricSpace glued_quotient_metric(const QuotientSpec& spec, std::size_t count,
                                        double connect_radius, std::uint64_t seed) {
  return GluedQuotient(spec, count, connect_radius, seed).to_metric_space();
}

}  // namespace sagitta
