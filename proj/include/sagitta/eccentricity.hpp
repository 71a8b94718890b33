#pragma once

// Critical-point invariants of finite metric spaces with a lower curvature
// bound k: k-eccentricity, the r_lambda radius, the critical radius, and the
// two flavours of r-sagitta.
//
// For p != q the k-eccentricity is
//
//   lambda_p(q) = sup_{x != q} (m(|px|) - m(|pq|)) / m(|qx|),
//
// and r_lambda is the unique r with m'(r - |pq|) / m'(r) = lambda, or +inf
// once lambda reaches Lambda(k, |pq|). On a finite sample lambda is always
// finite, so criticality is tested with the quantitative bound
// lambda_p(q) <= m''(|pq|) + tau.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sagitta/metric_space.hpp"
#include "sagitta/modelspace.hpp"

namespace sagitta {

struct Eccentricity {
  double lambda;
  std::size_t argmax;
};

struct EccentricityRecord {
  std::size_t p;
  std::size_t q;
  double lambda;
  std::size_t argmax;
  double r_lambda;  // +inf when lambda >= Lambda
  double cri;
  bool critical;
  double tolerance;
};

/// Brute-force supremum over all x != q; ties go to the lowest index.
Eccentricity eccentricity(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q);

/// +inf for k > 0, exp(-sqrt|k| h) otherwise.
double lambda_threshold(Curvature k, double h);

/// The ratio m'(r - h) / m'(r), stable for large r when k < 0.
double mk_prime_ratio(Curvature k, double r, double h);

/// r_lambda by bisection on the strictly increasing map r -> m'(r-h)/m'(r).
double solve_r_lambda(Curvature k, double h, double lambda);

double critical_radius(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q);

bool is_critical(const FiniteMetricSpace& x, Curvature k, std::size_t p, std::size_t q,
                 double tau);

EccentricityRecord eccentricity_record(const FiniteMetricSpace& x, Curvature k, std::size_t p,
                                       std::size_t q, double tau);

/// A_{h,r}(p): critical q with |pq| <= h + tau and cri_p(q) <= r + tau.
std::vector<std::size_t> critical_candidates(const FiniteMetricSpace& x, Curvature k,
                                             std::size_t p, double h, double r, double tau);

/// Comparison-angle test: every x != p sees some a in A at comparison angle
/// (at p) of at most pi/2 + tau.
bool is_critical_to_set(const FiniteMetricSpace& x, Curvature k, std::size_t p,
                        std::span<const std::size_t> set, double tau);

/// Ratio (m(|px|) - m(|pq|)) / m(|qx|) for model points.
double thales_ratio(Curvature k, const ModelPoint& p, const ModelPoint& q, const ModelPoint& x);

/// Twice the covering radius estimate of the sample.
double default_tau(const FiniteMetricSpace& x);

struct SagittaResult {
  double value = kInfinity;  // +inf when no pair/point qualifies
  std::size_t p = 0;         // witness base point
  std::size_t q = 0;         // witness partner (farthest set member for the modified form)
  std::size_t set_size = 0;  // |A_{h,r}(p)| at the witness (modified form)
};

double sagitta(const FiniteMetricSpace& x, Curvature k, double r, double tau);
double modified_sagitta(const FiniteMetricSpace& x, Curvature k, double r, double tau);

/// Caches m_k of every pairwise distance and the all-pairs criticality table,
/// so repeated queries on one space cost O(N) each and the sagittas O(N^3)
/// worst case with early exits.
class CriticalityAnalyzer {
 public:
  CriticalityAnalyzer(const FiniteMetricSpace& x, Curvature k, double tau);

  const FiniteMetricSpace& space() const noexcept { return x_; }
  Curvature curvature() const noexcept { return k_; }
  double tau() const noexcept { return tau_; }

  Eccentricity eccentricity(std::size_t p, std::size_t q) const;
  bool is_critical(std::size_t p, std::size_t q) const;
  double critical_radius(std::size_t p, std::size_t q) const;
  EccentricityRecord record(std::size_t p, std::size_t q) const;
  std::vector<std::size_t> critical_candidates(std::size_t p, double h, double r) const;
  bool is_critical_to_set(std::size_t p, std::span<const std::size_t> set) const;

  SagittaResult sagitta(double r) const;
  SagittaResult modified_sagitta(double r) const;

  /// Number of ordered critical pairs (forces the table).
  std::size_t critical_pair_count() const;

 private:
  struct Table {
    std::vector<unsigned char> critical;  // row-major N x N
    std::vector<double> cri;              // valid where critical
  };

  double m(std::size_t i, std::size_t j) const noexcept { return m_[i * n_ + j]; }
  // Scans lambda_p(q), stopping early once the ratio exceeds `stop`.
  Eccentricity scan(std::size_t p, std::size_t q, double stop) const;
  double cri_from_lambda(double h, double lambda) const;
  const Table& table() const;

  const FiniteMetricSpace& x_;
  Curvature k_;
  double tau_;
  std::size_t n_;
  std::vector<double> m_;
  std::vector<double> dm_;
  // Built on first use; the analyzer is not safe for concurrent first use.
  mutable std::optional<Table> table_;
};

}  // namespace sagitta
