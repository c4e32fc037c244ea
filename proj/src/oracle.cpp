#include "rbmu/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "rbmu/error.hpp"

namespace rbmu {

namespace {

using Blocks = std::vector<ComplexMatrix>;
using Score = std::function<double(const Blocks&)>;

constexpr int kRefineCount = 5;
constexpr int kRefineSweeps = 200;

void normalize_block(ComplexMatrix& b) {
  Eigen::JacobiSVD<ComplexMatrix> jac(b);
  const double s = jac.singularValues()(0);
  if (s > 0.0) b /= s;
}

// Even samples: full Gaussian blocks. Odd samples: rank-one blocks. Both are
// scaled so that every block has spectral norm exactly one.
Blocks sample_direction(const std::vector<BlockShape>& shapes, long index, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  auto draw = [&](Index rows, Index cols) {
    ComplexMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = Complex(gauss(rng), gauss(rng));
    return out;
  };
  Blocks d;
  for (const auto& s : shapes) {
    ComplexMatrix b = (index % 2 == 0) ? draw(s.rows, s.cols) : ComplexMatrix(draw(s.rows, 1) * draw(1, s.cols));
    normalize_block(b);
    d.push_back(std::move(b));
  }
  return d;
}

struct Scored {
  double score;
  Blocks direction;
};

// Coordinate search on the real and imaginary parts of every entry,
// renormalizing the touched block after each move. Maximizes `score`.
Scored coordinate_search(Scored start, const Score& score, long& evaluations) {
  double step = 0.25;
  for (int sweep = 0; sweep < kRefineSweeps && step > 1e-9; ++sweep) {
    bool improved = false;
    for (std::size_t b = 0; b < start.direction.size(); ++b) {
      ComplexMatrix& block = start.direction[b];
      for (Index e = 0; e < block.size(); ++e) {
        for (const Complex unit : {Complex(1, 0), Complex(0, 1)}) {
          for (const double sign : {1.0, -1.0}) {
            const ComplexMatrix saved = block;
            block.data()[e] += sign * step * unit;
            normalize_block(block);
            const double value = score(start.direction);
            ++evaluations;
            if (value > start.score) {
              start.score = value;
              improved = true;
              break;
            }
            block = saved;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return start;
}

// Samples `budget` directions, keeps the best few and sharpens them.
Scored search(const std::vector<BlockShape>& shapes, const Score& score, long budget, std::uint64_t seed,
              long& evaluations) {
  std::mt19937_64 rng(seed);
  std::vector<Scored> top;
  for (long s = 0; s < budget; ++s) {
    Blocks d = sample_direction(shapes, s, rng);
    const double value = score(d);
    ++evaluations;
    if (static_cast<int>(top.size()) < kRefineCount || value > top.back().score) {
      top.push_back({value, std::move(d)});
      std::sort(top.begin(), top.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
      if (static_cast<int>(top.size()) > kRefineCount) top.pop_back();
    }
  }
  Scored best{0.0, {}};
  for (auto& cand : top) {
    Scored refined = coordinate_search(std::move(cand), score, evaluations);
    if (best.direction.empty() || refined.score > best.score) best = std::move(refined);
  }
  return best;
}

}  // namespace

OracleEstimate brute_force_mu(const ComplexMatrix& m, const BlockStructure& structure, long budget,
                              std::uint64_t seed) {
  if (budget < 1) throw InputError("brute_force_mu: budget must be at least 1");
  if (m.rows() != structure.total_cols() || m.cols() != structure.total_rows())
    throw InputError("brute_force_mu: matrix shape does not match the structure");
  require_finite(m, "M");

  OracleEstimate out;
  out.samples_used = budget;
  if (m.cwiseAbs().maxCoeff() == 0.0) return out;

  // rho(D M) with max_i ||D_i|| = 1: Delta = D / lambda_e has norm 1 / rho.
  const Score score = [&m](const Blocks& d) {
    const ComplexMatrix dm = block_diagonal(d) * m;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(dm, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  Scored best = search(structure.blocks(), score, budget, seed, out.evaluations);
  out.mu_sampled_lower = best.score;
  out.best_direction = std::move(best.direction);
  return out;
}

OracleBackwardError brute_force_backward_error(const RosenbrockSystem& sys, Complex lambda,
                                               const Scenario& scenario, long budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("brute_force_backward_error: budget must be at least 1");
  OracleBackwardError out;
  out.samples_used = budget;
  const ComplexMatrix s = evaluate(sys, lambda);
  if (!s.allFinite()) throw NumericError("S(lambda) overflows at this lambda");
  if (is_eigenvalue(sys, lambda)) return out;

  const Index r = sys.r(), n = sys.n();
  std::vector<BlockShape> shapes;
  std::vector<std::pair<Index, Index>> corners;  // top-left corner of each block in S
  std::vector<Complex> weights;
  if (scenario.perturb_a) { shapes.push_back({r, r}); corners.push_back({0, 0}); weights.push_back(1.0); }
  if (scenario.perturb_b) { shapes.push_back({r, n}); corners.push_back({0, r}); weights.push_back(1.0); }
  if (scenario.perturb_c) { shapes.push_back({n, r}); corners.push_back({r, 0}); weights.push_back(1.0); }
  if (scenario.perturb_p) {
    Complex power(1.0, 0.0);
    for (Index j = 0; j <= sys.d(); ++j) {
      shapes.push_back({n, n});
      corners.push_back({r, r});
      weights.push_back(power);
      power *= lambda;
    }
  }

  // det(S - t E) = 0 first happens at |t| = 1 / rho(S^{-1} E).
  const ComplexMatrix s_inv = s.fullPivLu().inverse();
  const Score score = [&](const Blocks& d) {
    ComplexMatrix e = ComplexMatrix::Zero(r + n, r + n);
    for (std::size_t i = 0; i < d.size(); ++i)
      e.block(corners[i].first, corners[i].second, d[i].rows(), d[i].cols()) += weights[i] * d[i];
    Eigen::ComplexEigenSolver<ComplexMatrix> es(s_inv * e, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  long evaluations = 0;
  Scored best = search(shapes, score, budget, seed, evaluations);
  out.eta = best.score > 0.0 ? 1.0 / best.score : std::numeric_limits<double>::infinity();
  out.best_direction = std::move(best.direction);
  return out;
}

}  // namespace rbmu
