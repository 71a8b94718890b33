#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sagitta/harness/config.hpp"
#include "sagitta/harness/report.hpp"
#include "sagitta/lens.hpp"
#include "sagitta/rng.hpp"

namespace sagitta {

/// Dispatches on config.experiment; adds wall time when config.timing is set.
Report run_experiment(const ExperimentConfig& config);

Report run_identities(const ExperimentConfig& config);
Report run_thales(const ExperimentConfig& config);
Report run_rlambda(const ExperimentConfig& config);
Report run_eccentricity(const ExperimentConfig& config);
Report run_sagitta(const ExperimentConfig& config);
Report run_lens_volume(const ExperimentConfig& config);
Report run_net_inequality(const ExperimentConfig& config);
Report run_volume_bound(const ExperimentConfig& config);
Report run_equality_case(const ExperimentConfig& config);
Report run_c_constant(const ExperimentConfig& config);

/// Tangent directions of a random pi/2-net with `size` points: an antipodal
/// pair for size 2, otherwise size - 1 random directions closed up by the
/// negated normalized sum (so the origin lies in their convex hull).
std::vector<Eigen::VectorXd> random_net_directions(int n, int size, Rng& rng);

/// A point of the edge S0 of the canonical lens.
ModelPoint lens_edge_point(const LensParams& lens);

/// Fraction of the ball B(q, rho) inside the lens, by Monte Carlo. For q on
/// S0 it tends to dihedral_angle / 2 pi as rho -> 0.
MonteCarloEstimate edge_density_mc(const LensParams& lens, const ModelPoint& q, double rho,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace sagitta
