#include "sagitta/eccentricity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sagitta/error.hpp"
#include "sagitta/parallel.hpp"

namespace sagitta {

namespace {

void require_pair(const FiniteMetricSpace& x, std::size_t p, std::size_t q) {
  if (x.size() < 3) fail(ErrorKind::InsufficientData, "eccentricity needs at least 3 points");
  if (p >= x.size() || q >= x.size()) fail(ErrorKind::InvalidArgument, "point index out of range");
  if (p == q) fail(ErrorKind::InvalidArgument, "eccentricity needs p != q");
}

// cos(pi/2 + tau), floored at -1.
double right_angle_cosine(double tau) {
  return tau >= 0.5 * kPi ? -1.0 : -std::sin(tau);
}

}  // namespace

Eccentricity eccentricity(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q) {
  require_pair(x, p, q);
  const double base = mk(k, x(p, q));
  Eccentricity best{-kInfinity, p};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == q) continue;
    const double ratio = (mk(k, x(p, i)) - base) / mk(k, x(q, i));
    if (ratio > best.lambda) best = {ratio, i};
  }
  return best;
}

double lambda_threshold(Curvature k, double h) {
  if (!(h > 0.0) || !(h < space_form_diameter(k))) {
    fail(ErrorKind::InvalidArgument, "Lambda(k, h) needs 0 < h < diam S^n_k");
  }
  if (k.positive()) return kInfinity;
  return std::exp(-std::sqrt(-k.value()) * h);
}

double mk_prime_ratio(Curvature k, double r, double h) {
  if (!k.negative()) return mk_prime(k, r - h) / mk_prime(k, r);
  const double s = std::sqrt(-k.value());
  if (s * r <= 1.0) return mk_prime(k, r - h) / mk_prime(k, r);
  // sinh(a) / sinh(b) in log space; overflow-free for any r.
  const double a = s * (r - h);
  const double b = s * r;
  if (a == 0.0) return 0.0;
  const double abs_a = std::abs(a);
  const double log_num = abs_a + std::log1p(-std::exp(-2.0 * abs_a));
  const double log_den = b + std::log1p(-std::exp(-2.0 * b));
  return std::copysign(std::exp(log_num - log_den), a);
}

double solve_r_lambda(Curvature k, double h, double lambda) {
  if (std::isnan(lambda)) fail(ErrorKind::InvalidArgument, "lambda is NaN");
  const double threshold = lambda_threshold(k, h);  // validates h
  if (lambda < -1.0) {
    fail(ErrorKind::OutOfDomain, "lambda " + std::to_string(lambda) + " is below -1");
  }
  if (lambda >= threshold) return kInfinity;
  if (k.flat()) return h / (1.0 - lambda);

  // r -> m'(r-h)/m'(r) is strictly increasing with value -1 at r = h/2.
  double lo = 0.5 * h;
  if (lambda == -1.0) return lo;
  double hi;
  if (k.positive()) {
    hi = space_form_diameter(k);  // the ratio blows up to +inf there
  } else {
    hi = std::max(2.0 * h, 1.0 / std::sqrt(-k.value()));
    while (mk_prime_ratio(k, hi, h) <= lambda) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) fail(ErrorKind::NumericalDomain, "r_lambda bracket diverged");
    }
  }
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (mk_prime_ratio(k, mid, h) <= lambda) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// r_lambda as stored in records: solve when |pq| < diam, otherwise the only
// information left is the sign of lambda (r_lambda <= |pq| exactly when lambda <= 0).
double r_lambda_for(Curvature k, double h, double lambda) {
  if (h < space_form_diameter(k)) return solve_r_lambda(k, h, lambda);
  return lambda <= 0.0 ? h : kInfinity;
}

double cri_for(Curvature k, double h, double lambda) {
  if (lambda <= 0.0) return h;
  return std::max(h, r_lambda_for(k, h, lambda));
}

}  // namespace

double critical_radius(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q) {
  const Eccentricity e = eccentricity(x, k, p, q);
  return cri_for(k, x(p, q), e.lambda);
}

bool is_critical(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q,
                 double tau) {
  const Eccentricity e = eccentricity(x, k, p, q);
  return e.lambda <= mk_family(k, x(p, q)).ddm + tau;
}

EccentricityRecord eccentricity_record(const FiniteMetricSpace& x, Curvature k, std::size_t p,
                                       std::size_t q, double tau) {
  const Eccentricity e = eccentricity(x, k, p, q);
  const double h = x(p, q);
  const double r = r_lambda_for(k, h, e.lambda);
  return {p,
          q,
          e.lambda,
          e.argmax,
          r,
          std::max(h, r),
          e.lambda <= mk_family(k, h).ddm + tau,
          tau};
}

std::vector<std::size_t> critical_candidates(const FiniteMetricSpace& x, Curvature k,
                                             std::size_t p, double h, double r, double tau) {
  if (!(h > 0.0) || !(h <= r)) fail(ErrorKind::InvalidArgument, "critical_candidates needs 0 < h <= r");
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < x.size(); ++q) {
    if (q == p || x(p, q) > h + tau) continue;
    const EccentricityRecord rec = eccentricity_record(x, k, p, q, tau);
    if (rec.critical && rec.cri <= r + tau) out.push_back(q);
  }
  return out;
}

bool is_critical_to_set(const FiniteMetricSpace& x, Curvature k, std::size_t p,
                        std::span<const std::size_t> set, double tau) {
  if (set.empty()) fail(ErrorKind::InvalidArgument, "is_critical_to_set needs a nonempty set");
  for (std::size_t a : set) {
    if (a == p) fail(ErrorKind::InvalidArgument, "the set must not contain p");
  }
  const double limit = 0.5 * kPi + tau;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == p) continue;
    bool seen = false;
    for (std::size_t a : set) {
      if (comparison_angle_clamped(k, x(p, a), x(p, i), x(a, i)) <= limit) {
        seen = true;
        break;
      }
    }
    if (!seen) return false;
  }
  return true;
}

double thales_ratio(Curvature k, const ModelPoint& p, const ModelPoint& q, const ModelPoint& x) {
  const double qx = distance(q, x, k);
  if (qx == 0.0) fail(ErrorKind::InvalidArgument, "thales_ratio undefined at x = q");
  return (mk(k, distance(p, x, k)) - mk(k, distance(p, q, k))) / mk(k, qx);
}

double default_tau(const FiniteMetricSpace& x) { return 2.0 * covering_radius_estimate(x); }

double sagitta(const FiniteMetricSpace& x, Curvature k, double r, double tau) {
  return CriticalityAnalyzer(x, k, tau).sagitta(r).value;
}

double modified_sagitta(const FiniteMetricSpace& x, Curvature k, double r, double tau) {
  return CriticalityAnalyzer(x, k, tau).modified_sagitta(r).value;
}

// --------------------------------------------------------------------------

CriticalityAnalyzer::CriticalityAnalyzer(const FiniteMetricSpace& x, Curvature k, double tau)
    : x_(x), k_(k), tau_(tau), n_(x.size()) {
  if (n_ < 3) fail(ErrorKind::InsufficientData, "criticality analysis needs at least 3 points");
  if (!(tau >= 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be non-negative");
  m_.resize(n_ * n_);
  dm_.resize(n_ * n_);
  parallel_for(n_, [&](std::size_t i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const MkValues f = mk_family(k_, x_(i, j));
      m_[i * n_ + j] = f.m;
      dm_[i * n_ + j] = f.dm;
    }
  });
}

Eccentricity CriticalityAnalyzer::scan(std::size_t p, std::size_t q, double stop) const {
  const double* mp = m_.data() + p * n_;
  const double* mq = m_.data() + q * n_;
  const double base = mp[q];
  Eccentricity best{-kInfinity, p};
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == q) continue;
    const double ratio = (mp[i] - base) / mq[i];
    if (ratio > best.lambda) {
      best = {ratio, i};
      if (ratio > stop) break;
    }
  }
  return best;
}

Eccentricity CriticalityAnalyzer::eccentricity(std::size_t p, std::size_t q) const {
  require_pair(x_, p, q);
  return scan(p, q, kInfinity);
}

double CriticalityAnalyzer::cri_from_lambda(double h, double lambda) const {
  return cri_for(k_, h, lambda);
}

bool CriticalityAnalyzer::is_critical(std::size_t p, std::size_t q) const {
  require_pair(x_, p, q);
  if (table_) return table_->critical[p * n_ + q] != 0;
  const double stop = mk_family(k_, x_(p, q)).ddm + tau_;
  return scan(p, q, stop).lambda <= stop;
}

double CriticalityAnalyzer::critical_radius(std::size_t p, std::size_t q) const {
  return cri_from_lambda(x_(p, q), eccentricity(p, q).lambda);
}

EccentricityRecord CriticalityAnalyzer::record(std::size_t p, std::size_t q) const {
  const Eccentricity e = eccentricity(p, q);
  const double h = x_(p, q);
  const double r = r_lambda_for(k_, h, e.lambda);
  return {p, q, e.lambda, e.argmax, r, std::max(h, r),
          e.lambda <= mk_family(k_, h).ddm + tau_, tau_};
}

const CriticalityAnalyzer::Table& CriticalityAnalyzer::table() const {
  if (table_) return *table_;
  Table t;
  t.critical.assign(n_ * n_, 0);
  t.cri.assign(n_ * n_, kInfinity);
  parallel_for(n_, [&](std::size_t p) {
    for (std::size_t q = 0; q < n_; ++q) {
      if (q == p) continue;
      const double h = x_(p, q);
      const double stop = mk_family(k_, h).ddm + tau_;
      const Eccentricity e = scan(p, q, stop);
      if (e.lambda <= stop) {
        t.critical[p * n_ + q] = 1;
        t.cri[p * n_ + q] = cri_from_lambda(h, e.lambda);
      }
    }
  });
  table_ = std::move(t);
  return *table_;
}

std::size_t CriticalityAnalyzer::critical_pair_count() const {
  const Table& t = table();
  return static_cast<std::size_t>(std::count(t.critical.begin(), t.critical.end(), 1));
}

std::vector<std::size_t> CriticalityAnalyzer::critical_candidates(std::size_t p, double h,
                                                                  double r) const {
  if (!(h > 0.0) || !(h <= r)) fail(ErrorKind::InvalidArgument, "critical_candidates needs 0 < h <= r");
  const Table& t = table();
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < n_; ++q) {
    if (q == p || !t.critical[p * n_ + q]) continue;
    if (x_(p, q) <= h + tau_ && t.cri[p * n_ + q] <= r + tau_) out.push_back(q);
  }
  return out;
}

bool CriticalityAnalyzer::is_critical_to_set(std::size_t p,
                                             std::span<const std::size_t> set) const {
  if (set.empty()) fail(ErrorKind::InvalidArgument, "is_critical_to_set needs a nonempty set");
  const double floor_cos = right_angle_cosine(tau_);
  const double kv = k_.value();
  const double* mp = m_.data() + p * n_;
  const double* dp = dm_.data() + p * n_;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == p) continue;
    bool seen = false;
    for (std::size_t a : set) {
      // Law of cosines at p, compared in cosine form.
      const double lhs = mp[a] + mp[i] - kv * mp[a] * mp[i] - m(a, i);
      if (lhs >= floor_cos * dp[a] * dp[i]) {
        seen = true;
        break;
      }
    }
    if (!seen) return false;
  }
  return true;
}

SagittaResult CriticalityAnalyzer::sagitta(double r) const {
  const Table& t = table();
  SagittaResult best;
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::size_t q = p + 1; q < n_; ++q) {
      if (!t.critical[p * n_ + q] || !t.critical[q * n_ + p]) continue;
      const double cri = std::min(t.cri[p * n_ + q], t.cri[q * n_ + p]);
      if (cri > r + tau_) continue;
      if (x_(p, q) < best.value) best = {x_(p, q), p, q, 0};
    }
  }
  return best;
}

SagittaResult CriticalityAnalyzer::modified_sagitta(double r) const {
  const Table& t = table();
  std::vector<double> grid;
  grid.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < i; ++j) grid.push_back(x_(i, j));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double floor_cos = right_angle_cosine(tau_);
  const double kv = k_.value();
  SagittaResult best;
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> uncovered;
  for (std::size_t p = 0; p < n_; ++p) {
    candidates.clear();
    for (std::size_t q = 0; q < n_; ++q) {
      if (q == p || !t.critical[p * n_ + q] || t.cri[p * n_ + q] > r + tau_) continue;
      // Only sets reachable at an h below the current best can improve it.
      if (x_(p, q) - tau_ > best.value) continue;
      candidates.push_back(q);
    }
    if (candidates.empty()) continue;
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      return x_(p, a) < x_(p, b) || (x_(p, a) == x_(p, b) && a < b);
    });
    uncovered.clear();
    for (std::size_t i = 0; i < n_; ++i)
      if (i != p) uncovered.push_back(i);

    const double* mp = m_.data() + p * n_;
    const double* dp = dm_.data() + p * n_;
    std::size_t used = 0;
    for (std::size_t a : candidates) {
      ++used;
      const double* ma = m_.data() + a * n_;
      const double base = mp[a];
      const double dpa = dp[a];
      std::erase_if(uncovered, [&](std::size_t i) {
        const double lhs = base + mp[i] - kv * base * mp[i] - ma[i];
        return lhs >= floor_cos * dpa * dp[i];
      });
      if (!uncovered.empty()) continue;
      const double need = x_(p, a);
      // Smallest grid value h with need <= h + tau; A_{h,r}(p) then contains
      // every candidate used so far.
      const auto it = std::lower_bound(grid.begin(), grid.end(), need - tau_);
      const double h = it == grid.end() ? need : *it;
      // The set at h also holds any later candidate within h + tau.
      std::size_t size = used;
      while (size < candidates.size() && x_(p, candidates[size]) <= h + tau_) ++size;
      if (h < best.value) best = {h, p, a, size};
      break;
    }
  }
  return best;
}

}  // namespace sagitta
