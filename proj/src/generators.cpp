#include "rbmu/generators.hpp"

namespace rbmu {

ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      out(i, j) = Complex(re, gauss(rng));
    }
  return out;
}

RosenbrockSystem random_system(Index r, Index n, Index d, std::mt19937_64& rng) {
  ComplexMatrix a = random_matrix(r, r, rng);
  ComplexMatrix b = random_matrix(r, n, rng);
  ComplexMatrix c = random_matrix(n, r, rng);
  std::vector<ComplexMatrix> p;
  for (Index k = 0; k <= d; ++k) p.push_back(random_matrix(n, n, rng));
  return RosenbrockSystem(std::move(a), std::move(b), std::move(c), std::move(p));
}

RosenbrockSystem diagonal_system(const std::vector<Complex>& a, Index n) {
  const Index r = static_cast<Index>(a.size());
  ComplexMatrix am = ComplexMatrix::Zero(r, r);
  for (Index i = 0; i < r; ++i) am(i, i) = a[static_cast<std::size_t>(i)];
  return RosenbrockSystem(am, ComplexMatrix::Zero(r, n), ComplexMatrix::Zero(n, r),
                          {ComplexMatrix::Identity(n, n)});
}

RosenbrockSystem a_unreachable_system(Complex a) {
  ComplexMatrix am(1, 1);
  am(0, 0) = a;
  ComplexMatrix b = ComplexMatrix::Zero(1, 3);
  b(0, 2) = 1.0;
  ComplexMatrix c = ComplexMatrix::Zero(3, 1);
  c(0, 0) = 1.0;
  ComplexMatrix p0 = ComplexMatrix::Zero(3, 3);
  p0(1, 0) = 1.0;
  p0(2, 1) = 1.0;
  return RosenbrockSystem(am, b, c, {p0});
}

RosenbrockSystem fluid_solid_system(std::uint64_t seed) {
  constexpr Index r = 3, n = 5;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> pole(0.2, 2.0);
  auto real_matrix = [&](Index rows, Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = gauss(rng);
    return m;
  };
  auto spd = [&]() {
    const Eigen::MatrixXd g = real_matrix(n, n);
    return Eigen::MatrixXd(g * g.transpose() + Eigen::MatrixXd::Identity(n, n));
  };
  const Eigen::MatrixXd mass = spd();
  const Eigen::MatrixXd stiff = spd();
  const Eigen::MatrixXd ct = real_matrix(n, r);  // columns are the rank-one E_i factors
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(r, r);
  for (Index i = 0; i < r; ++i) alpha(i, i) = pole(rng);

  const ComplexMatrix a = alpha.cast<Complex>();
  const ComplexMatrix b = ct.transpose().cast<Complex>();
  const ComplexMatrix c = (ct * alpha).cast<Complex>();
  const ComplexMatrix a0 = (mass - ct * ct.transpose()).cast<Complex>();
  const ComplexMatrix a1 = (-stiff).cast<Complex>();
  return RosenbrockSystem(a, b, c, {a0, a1});
}

}  // namespace rbmu
