#pragma once

#include <vector>

#include "rbmu/linalg.hpp"

namespace rbmu {

// S(z) = [[A - z I_r, B], [C, P(z)]] with P(z) = sum_k z^k A_k.
class RosenbrockSystem {
 public:
  /// Validates shapes: A r x r, B r x n, C n x r, every A_k n x n, at least
  /// one coefficient, r, n >= 1, all entries finite. Throws InputError.
  RosenbrockSystem(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c,
                   std::vector<ComplexMatrix> poly_coeffs);

  Index r() const { return a_.rows(); }
  Index n() const { return b_.cols(); }
  Index d() const { return static_cast<Index>(poly_.size()) - 1; }

  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& b() const { return b_; }
  const ComplexMatrix& c() const { return c_; }
  const std::vector<ComplexMatrix>& poly_coeffs() const { return poly_; }
  const ComplexMatrix& coeff(Index k) const { return poly_.at(static_cast<std::size_t>(k)); }

  /// P(lambda).
  ComplexMatrix poly_at(Complex lambda) const;

 private:
  ComplexMatrix a_, b_, c_;
  std::vector<ComplexMatrix> poly_;
};

inline constexpr double kEigenvalueTol = 1e-10;

ComplexMatrix evaluate(const RosenbrockSystem& sys, Complex lambda);

/// sigma_min(S(lambda)) <= tol * ||S(lambda)||.
bool is_eigenvalue(const RosenbrockSystem& sys, Complex lambda, double tol = kEigenvalueTol);

/// sigma_min(S(lambda)) / (1 + |lambda| + ... + |lambda|^max(1, d)). The
/// degree is at least one because the -z I_r term is always present.
double unstructured_backward_error(const RosenbrockSystem& sys, Complex lambda);

/// max{||A||, ||B||, ||C||, ||A_0||, ..., ||A_d||}.
double max_block_norm(const RosenbrockSystem& sys);

}  // namespace rbmu
