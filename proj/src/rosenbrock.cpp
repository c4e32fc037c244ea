#include "rbmu/rosenbrock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "rbmu/error.hpp"

namespace rbmu {

namespace {

void expect_shape(const ComplexMatrix& m, Index rows, Index cols, const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << ": expected " << rows << "x" << cols << ", got " << m.rows() << "x" << m.cols();
    throw InputError(os.str());
  }
}

}  // namespace

RosenbrockSystem::RosenbrockSystem(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c,
                                   std::vector<ComplexMatrix> poly_coeffs)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), poly_(std::move(poly_coeffs)) {
  if (poly_.empty()) throw InputError("P: at least one coefficient (A_0) is required");
  const Index r = a_.rows();
  const Index n = poly_.front().rows();
  if (r < 1) throw InputError("A: state dimension r must be at least 1");
  if (n < 1) throw InputError("P[0]: input/output dimension n must be at least 1");
  expect_shape(a_, r, r, "A");
  expect_shape(b_, r, n, "B");
  expect_shape(c_, n, r, "C");
  for (std::size_t k = 0; k < poly_.size(); ++k) {
    expect_shape(poly_[k], n, n, "P[" + std::to_string(k) + "]");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  for (std::size_t k = 0; k < poly_.size(); ++k) require_finite(poly_[k], "P[" + std::to_string(k) + "]");
}

ComplexMatrix RosenbrockSystem::poly_at(Complex lambda) const {
  // Horner from the top coefficient down.
  ComplexMatrix acc = poly_.back();
  for (auto it = poly_.rbegin() + 1; it != poly_.rend(); ++it) acc = lambda * acc + *it;
  return acc;
}

ComplexMatrix evaluate(const RosenbrockSystem& sys, Complex lambda) {
  const Index r = sys.r(), n = sys.n();
  ComplexMatrix s(r + n, r + n);
  s.topLeftCorner(r, r) = sys.a() - lambda * ComplexMatrix::Identity(r, r);
  s.topRightCorner(r, n) = sys.b();
  s.bottomLeftCorner(n, r) = sys.c();
  s.bottomRightCorner(n, n) = sys.poly_at(lambda);
  return s;
}

bool is_eigenvalue(const RosenbrockSystem& sys, Complex lambda, double tol) {
  return det_is_singular(evaluate(sys, lambda), tol);
}

double unstructured_backward_error(const RosenbrockSystem& sys, Complex lambda) {
  const Index degree = std::max<Index>(1, sys.d());
  const double modulus = std::abs(lambda);
  double weight = 0.0, power = 1.0;
  for (Index k = 0; k <= degree; ++k) {
    weight += power;
    power *= modulus;
  }
  return sigma_min(evaluate(sys, lambda)) / weight;
}

double max_block_norm(const RosenbrockSystem& sys) {
  double out = std::max({norm2(sys.a()), norm2(sys.b()), norm2(sys.c())});
  for (const auto& ak : sys.poly_coeffs()) out = std::max(out, norm2(ak));
  return out;
}

}  // namespace rbmu
