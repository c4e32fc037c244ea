#pragma once

// Seeded instance generators for tests, the acceptance suite and demos.

#include <cstdint>
#include <random>
#include <vector>

#include "rbmu/linalg.hpp"
#include "rbmu/rosenbrock.hpp"

namespace rbmu {

/// Entries re + i*im with re, im standard normal.
ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng);

/// All blocks dense complex Gaussian.
RosenbrockSystem random_system(Index r, Index n, Index d, std::mt19937_64& rng);

/// A = diag(a), B = 0, C = 0, P(z) = I_n. The A scenario has eta = min |a_i - lambda|.
RosenbrockSystem diagonal_system(const std::vector<Complex>& a, Index n = 1);

/// r = 1, n = 3, d = 0 system with a != 0 whose A-only backward error is infinite at every lambda.
RosenbrockSystem a_unreachable_system(Complex a);

/// Fluid-solid vibration model written as a Rosenbrock system (r = 3, n = 5, d = 1):
/// A = diag(alpha_i > 0), B = Ct^T, C = Ct A, A0 = M - Ct Ct^T, A1 = -K with M, K real SPD.
RosenbrockSystem fluid_solid_system(std::uint64_t seed);

}  // namespace rbmu
