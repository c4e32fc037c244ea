#pragma once

// Dense complex kernels shared by every other module. Eigen does the
// factorizations; the contracts (sorting, multiplicity grouping, relative
// tolerances, finiteness checks) live here.

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rbmu {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Relative gap under which a singular value counts as tied with the largest.
inline constexpr double kMultiplicity = 1e-8;
// Absolute floor applied under every relative tolerance.
inline constexpr double kFloor = 1e-14;
// solve() refuses matrices with sigma_min <= kSolveSingular * ||a||.
inline constexpr double kSolveSingular = 1e-12;
}  // namespace tol

struct SvdFactors {
  RealVector singular_values;  // nonincreasing
  ComplexMatrix left_vectors;  // k x k
  ComplexMatrix right_vectors; // p x p
  Index multiplicity_of_max = 0;

  double sigma_max() const { return singular_values.size() ? singular_values(0) : 0.0; }
};

struct EigenPair {
  double radius = 0.0;
  Complex eigenvalue{0.0, 0.0};
  ComplexVector vector;  // unit 2-norm
};

/// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, std::string_view what = "matrix");

/// Full SVD with singular values sorted descending. Singular values within
/// `multiplicity_tol` (relative, floored at tol::kFloor) of the largest are
/// counted in multiplicity_of_max.
SvdFactors svd(const ComplexMatrix& m, double multiplicity_tol = tol::kMultiplicity);

/// Number of leading singular values in `s` tied with s(0) under a relative tolerance.
Index count_tied_with_max(const RealVector& s, double relative_tol);

double sigma_max(const ComplexMatrix& m);
double sigma_min(const ComplexMatrix& m);

/// Spectral norm; 0 for empty matrices.
double norm2(const ComplexMatrix& m);

/// Largest-modulus eigenvalue of a square matrix with a unit right eigenvector.
EigenPair spectral_radius(const ComplexMatrix& m);

/// Solves a x = b. Throws SingularMatrixError when sigma_min(a) <= 1e-12 ||a||.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// True iff sigma_min(a) <= tol * ||a|| (with the absolute floor).
bool det_is_singular(const ComplexMatrix& a, double tol);

/// Block-diagonal assembly of possibly rectangular blocks.
ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks);

/// P P^* P == P to `tol` relative to max(1, ||P||).
bool is_partial_isometry(const ComplexMatrix& p, double tol = 1e-10);

}  // namespace rbmu
