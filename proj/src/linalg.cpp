#include "rbmu/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rbmu/error.hpp"

namespace rbmu {

void require_finite(const ComplexMatrix& m, std::string_view what) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << what << ": non-finite entry at (" << i << ", " << j << ")";
        throw InputError(os.str());
      }
    }
  }
}

Index count_tied_with_max(const RealVector& s, double relative_tol) {
  if (s.size() == 0) return 0;
  const double gap = std::max(relative_tol * s(0), tol::kFloor);
  Index count = 1;
  while (count < s.size() && s(0) - s(count) <= gap) ++count;
  return count;
}

SvdFactors svd(const ComplexMatrix& m, double multiplicity_tol) {
  if (m.size() == 0) throw InputError("svd: empty matrix");
  require_finite(m, "svd");
  Eigen::JacobiSVD<ComplexMatrix> jac(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (jac.info() != Eigen::Success) throw NumericError("svd: Jacobi iteration failed");

  // min(k, p) values, already sorted descending by Eigen.
  SvdFactors f;
  f.singular_values = jac.singularValues();
  f.left_vectors = jac.matrixU();
  f.right_vectors = jac.matrixV();
  f.multiplicity_of_max = count_tied_with_max(f.singular_values, multiplicity_tol);
  return f;
}

double sigma_max(const ComplexMatrix& m) {
  if (m.size() == 0) throw InputError("sigma_max: empty matrix");
  require_finite(m, "sigma_max");
  Eigen::JacobiSVD<ComplexMatrix> jac(m);
  return jac.singularValues()(0);
}

double sigma_min(const ComplexMatrix& m) {
  if (m.size() == 0) throw InputError("sigma_min: empty matrix");
  require_finite(m, "sigma_min");
  Eigen::JacobiSVD<ComplexMatrix> jac(m);
  const auto& s = jac.singularValues();
  // A rectangular matrix has min(k, p) singular values; the smallest is last.
  return s(s.size() - 1);
}

double norm2(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : sigma_max(m); }

EigenPair spectral_radius(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("spectral_radius: matrix is not square");
  if (m.size() == 0) throw InputError("spectral_radius: empty matrix");
  require_finite(m, "spectral_radius");

  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw NumericError("spectral_radius: eigen-solver did not converge");

  const auto& values = es.eigenvalues();
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i) {
    if (std::abs(values(i)) > std::abs(values(best))) best = i;
  }
  EigenPair out;
  out.eigenvalue = values(best);
  out.radius = std::abs(values(best));
  out.vector = es.eigenvectors().col(best);
  const double vn = out.vector.norm();
  if (!(vn > 0.0)) throw NumericError("spectral_radius: zero eigenvector returned");
  out.vector /= vn;

  const double scale = std::max(norm2(m), tol::kFloor);
  const double residual = (m * out.vector - out.eigenvalue * out.vector).norm();
  if (residual > 1e-8 * scale) {
    // Defective clusters can give poor vectors; one step of inverse
    // iteration around the computed eigenvalue usually repairs it.
    const Index n = m.rows();
    ComplexMatrix shifted = m - (out.eigenvalue + Complex(1e-10 * scale, 0.0)) *
                                    ComplexMatrix::Identity(n, n);
    ComplexVector v = shifted.fullPivLu().solve(out.vector);
    if (v.allFinite() && v.norm() > 0.0) {
      v /= v.norm();
      if ((m * v - out.eigenvalue * v).norm() < residual) out.vector = v;
    }
    const double repaired = (m * out.vector - out.eigenvalue * out.vector).norm();
    if (repaired > 1e-8 * scale) {
      std::ostringstream os;
      os << "spectral_radius: eigenpair residual " << repaired << " exceeds 1e-8 * ||m|| = "
         << 1e-8 * scale;
      throw NumericError(os.str());
    }
  }
  return out;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols()) throw InputError("solve: matrix is not square");
  if (b.rows() != a.rows()) throw InputError("solve: right-hand side has wrong row count");
  require_finite(a, "solve");
  require_finite(b, "solve rhs");
  Eigen::JacobiSVD<ComplexMatrix> jac(a);
  const auto& s = jac.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= std::max(tol::kSolveSingular * s(0), tol::kFloor)) {
    std::ostringstream os;
    os << "solve: matrix is numerically singular (sigma_min = " << smin << ")";
    throw SingularMatrixError(os.str(), smin);
  }
  return a.partialPivLu().solve(b);
}

bool det_is_singular(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw InputError("det_is_singular: matrix is not square");
  if (a.size() == 0) throw InputError("det_is_singular: empty matrix");
  require_finite(a, "det_is_singular");
  Eigen::JacobiSVD<ComplexMatrix> jac(a);
  const auto& s = jac.singularValues();
  return s(s.size() - 1) <= std::max(tol * s(0), tol::kFloor);
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

bool is_partial_isometry(const ComplexMatrix& p, double tol) {
  if (p.size() == 0) return true;
  const ComplexMatrix defect = p * p.adjoint() * p - p;
  return norm2(defect) <= tol * std::max(1.0, norm2(p));
}

}  // namespace rbmu
