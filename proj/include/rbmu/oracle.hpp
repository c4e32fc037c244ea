#pragma once

// Sampling estimators that share no code path with the reduction or the
// scaling/power machinery. Every value they return is attained by an
// explicit feasible perturbation, so it is a valid one-sided bound.

#include <cstdint>
#include <vector>

#include "rbmu/linalg.hpp"
#include "rbmu/reduction.hpp"
#include "rbmu/rosenbrock.hpp"

namespace rbmu {

struct OracleEstimate {
  double mu_sampled_lower = 0.0;
  std::vector<ComplexMatrix> best_direction;  // each block has sigma_max 1
  long samples_used = 0;
  long evaluations = 0;  // samples plus refinement evaluations
};

/// Max of rho(D M) over random block directions D (each block normalized to
/// spectral norm 1), followed by coordinate search on the best five.
OracleEstimate brute_force_mu(const ComplexMatrix& m, const BlockStructure& structure, long budget,
                              std::uint64_t seed);

struct OracleBackwardError {
  double eta = 0.0;  // smallest |t| * ||dS||_inf found with det(S(lambda) - t dS) = 0
  std::vector<ComplexMatrix> best_direction;
  long samples_used = 0;
};

/// Random structured dS directions scaled onto the singularity locus.
OracleBackwardError brute_force_backward_error(const RosenbrockSystem& sys, Complex lambda,
                                               const Scenario& scenario, long budget, std::uint64_t seed);

}  // namespace rbmu
