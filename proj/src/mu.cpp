#include "rbmu/mu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "rbmu/error.hpp"

namespace rbmu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponent attached to each row (k-space) and column (p-space) of M.
RealVector row_exponents(const BlockStructure& st, const ScalingVector& x) {
  RealVector out(st.total_cols());
  for (Index i = 0; i < st.count(); ++i) out.segment(st.col_offset(i), st[i].cols).setConstant(x(i));
  return out;
}

RealVector col_exponents(const BlockStructure& st, const ScalingVector& x) {
  RealVector out(st.total_rows());
  for (Index i = 0; i < st.count(); ++i) out.segment(st.row_offset(i), st[i].rows).setConstant(x(i));
  return out;
}

void check_scaling(const BlockStructure& st, const ScalingVector& x) {
  if (x.size() != st.count()) {
    throw InputError("scaling vector has " + std::to_string(x.size()) + " entries, structure has " +
                     std::to_string(st.count()) + " blocks");
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || std::abs(x(i)) > kMaxScaling) {
      std::ostringstream os;
      os << "scaling exponent x[" << i << "] = " << x(i) << " outside [-40, 40]";
      throw InputError(os.str());
    }
  }
}

ComplexVector random_unit(Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexVector v(size);
  for (Index i = 0; i < size; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

// ------------------------------------------------------------ optimizer

// Objective over the free coordinates y = (x_2, ..., x_n); x_1 is frozen at 0.
class ScaledSigmaObjective {
 public:
  ScaledSigmaObjective(const ComplexMatrix& m, const BlockStructure& st) : m_(m), st_(st) {}

  Index dim() const { return st_.count() - 1; }

  ScalingVector full(const RealVector& y) const {
    ScalingVector x(st_.count());
    x(0) = 0.0;
    x.tail(dim()) = y;
    return x;
  }

  bool in_range(const RealVector& y) const {
    return y.size() == 0 || (y.array().isFinite().all() && y.cwiseAbs().maxCoeff() <= kMaxScaling);
  }

  double value(const RealVector& y) {
    if (!in_range(y)) return kInf;
    ++evaluations;
    return scaled_sigma(m_, st_, full(y));
  }

  SigmaGradient gradient(const RealVector& y) {
    ++evaluations;
    return scaled_sigma_gradient(m_, st_, full(y));
  }

  long evaluations = 0;

 private:
  const ComplexMatrix& m_;
  const BlockStructure& st_;
};

struct LocalResult {
  RealVector y;
  double value = kInf;
  int iterations = 0;
  bool used_simplex = false;
};

// Nelder-Mead over y, started from a small simplex around y0.
void simplex_polish(ScaledSigmaObjective& obj, LocalResult& best, int max_iters) {
  const Index dim = obj.dim();
  if (dim == 0) return;
  std::vector<RealVector> pts;
  std::vector<double> vals;
  pts.push_back(best.y);
  vals.push_back(best.value);
  const double size = 1e-3;
  for (Index i = 0; i < dim; ++i) {
    RealVector p = best.y;
    p(i) += size;
    pts.push_back(p);
    vals.push_back(obj.value(p));
  }
  const auto nverts = pts.size();
  std::vector<std::size_t> order(nverts);
  for (int it = 0; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[nverts - 2];
    double span = 0.0;
    for (std::size_t j = 0; j < nverts; ++j) span = std::max(span, (pts[j] - pts[lo]).cwiseAbs().maxCoeff());
    if (span < 1e-13 || vals[hi] - vals[lo] <= 1e-16 * std::max(1.0, std::abs(vals[lo]))) break;

    RealVector centroid = RealVector::Zero(dim);
    for (std::size_t j = 0; j < nverts; ++j) if (j != hi) centroid += pts[j];
    centroid /= static_cast<double>(dim);

    const RealVector refl = centroid + (centroid - pts[hi]);
    const double frefl = obj.value(refl);
    if (frefl < vals[lo]) {
      const RealVector expd = centroid + 2.0 * (centroid - pts[hi]);
      const double fexp = obj.value(expd);
      if (fexp < frefl) { pts[hi] = expd; vals[hi] = fexp; }
      else { pts[hi] = refl; vals[hi] = frefl; }
    } else if (frefl < vals[second]) {
      pts[hi] = refl;
      vals[hi] = frefl;
    } else {
      const bool outside = frefl < vals[hi];
      const RealVector contr = outside ? RealVector(centroid + 0.5 * (refl - centroid))
                                       : RealVector(centroid + 0.5 * (pts[hi] - centroid));
      const double fcontr = obj.value(contr);
      if (fcontr < std::min(frefl, vals[hi])) {
        pts[hi] = contr;
        vals[hi] = fcontr;
      } else {
        for (std::size_t j = 0; j < nverts; ++j) {
          if (j == lo) continue;
          pts[j] = pts[lo] + 0.5 * (pts[j] - pts[lo]);
          vals[j] = obj.value(pts[j]);
        }
      }
    }
  }
  for (std::size_t j = 0; j < nverts; ++j) {
    if (vals[j] < best.value) {
      best.value = vals[j];
      best.y = pts[j];
    }
  }
}

// BFGS with a weak Wolfe bracketing line search. The gradient is exact where
// sigma_max is simple; at ties it is one element of the subdifferential,
// which is enough to keep the iteration moving. When the iterate stalls on a
// tie, a simplex polish takes over.
LocalResult quasi_newton(ScaledSigmaObjective& obj, RealVector y, const MuOptions& opts) {
  const Index dim = obj.dim();
  LocalResult res;
  SigmaGradient g = obj.gradient(y);
  double f = g.sigma;
  RealVector grad = g.values.tail(dim);
  res.y = y;
  res.value = f;
  if (dim == 0) return res;

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
  bool last_nonsmooth = g.nonsmooth;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (!g.nonsmooth && grad.norm() <= opts.grad_tol * std::max(f, tol::kFloor)) break;

    RealVector dir = -h * grad;
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      dir = -grad;
      slope = grad.dot(dir);
      if (!(slope < 0.0)) break;
    }

    constexpr double c1 = 1e-4, c2 = 0.9;
    double lo = 0.0, hi = kInf, t = 1.0;
    RealVector y_new = y, grad_new = grad;
    double f_new = f;
    SigmaGradient g_new;
    bool accepted = false, armijo_point = false;
    for (int ls = 0; ls < 60; ++ls) {
      const RealVector trial = y + t * dir;
      if (!obj.in_range(trial)) {
        hi = t;
      } else {
        SigmaGradient gt = obj.gradient(trial);
        const RealVector gtv = gt.values.tail(dim);
        if (gt.sigma > f + c1 * t * slope) {
          hi = t;
        } else {
          // Armijo holds: remember the point in case curvature never does.
          if (!armijo_point || gt.sigma < f_new) {
            y_new = trial;
            f_new = gt.sigma;
            grad_new = gtv;
            g_new = gt;
            armijo_point = true;
          }
          if (gtv.dot(dir) < c2 * slope) {
            lo = t;
          } else {
            y_new = trial;
            f_new = gt.sigma;
            grad_new = gtv;
            g_new = gt;
            accepted = true;
            break;
          }
        }
      }
      t = std::isinf(hi) ? 2.0 * t : 0.5 * (lo + hi);
      if (!std::isinf(hi) && hi - lo < 1e-16 * std::max(1.0, t)) break;
    }
    if (!accepted && !armijo_point) break;  // no decrease possible along dir

    const RealVector s = y_new - y;
    const RealVector q = grad_new - grad;
    y = y_new;
    f = f_new;
    grad = grad_new;
    g = g_new;
    last_nonsmooth = g.nonsmooth;
    if (f < res.value) {
      res.value = f;
      res.y = y;
    }
    if (s.norm() <= 1e-12 * std::max(1.0, y.norm())) break;

    const double sq = s.dot(q);
    if (sq > 1e-16 * s.norm() * q.norm()) {
      if (it == 0) h *= sq / q.squaredNorm();
      const double rho = 1.0 / sq;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
      h = (eye - rho * s * q.transpose()) * h * (eye - rho * q * s.transpose()) + rho * s * s.transpose();
    }
  }
  res.iterations = it;
  if (last_nonsmooth || it >= opts.max_iters) {
    simplex_polish(obj, res, 200 * static_cast<int>(dim + 1));
    res.used_simplex = true;
  }
  return res;
}

// ----------------------------------------------------------- lower bound

struct Candidate {
  double value = 0.0;
  PartialIsometrySet p;
  std::string source;
};

double rho_of(const PartialIsometrySet& p, const ComplexMatrix& m) {
  return spectral_radius(assemble(p) * m).radius;
}

void consider(Candidate& best, const PartialIsometrySet& p, double value, const std::string& source) {
  if (value > best.value) {
    best.value = value;
    best.p = p;
    best.source = source;
  }
}

Index block_count_nonzero(const PartialIsometrySet& p) {
  Index count = 0;
  for (const auto& b : p) count += (b.cwiseAbs().maxCoeff() > 0.0);
  return count;
}

// Dominant eigenvector w of P M, then each block maps z_i = (M w)_i onto w_i.
int refine_alternating(const ComplexMatrix& m, const BlockStructure& st, PartialIsometrySet p, int rounds,
                       Candidate& best) {
  int used = 0;
  double prev = -1.0;
  int stalls = 0;
  for (; used < rounds; ++used) {
    if (block_count_nonzero(p) == 0) break;
    const EigenPair ep = spectral_radius(assemble(p) * m);
    consider(best, p, ep.radius, "alternating");
    if (ep.radius <= 0.0) break;
    stalls = (std::abs(ep.radius - prev) <= 1e-15 * ep.radius) ? stalls + 1 : 0;
    if (stalls >= 3) break;
    prev = ep.radius;
    const ComplexVector z = m * ep.vector;
    p = rank_one_isometries(st, z, ep.vector);
  }
  return used;
}

// Power iteration on the pair of alignment conditions
//   M b = beta a,  z_i = (|w_i| / |a_i|) a_i,  M^* z = beta w,  b_i = (|a_i| / |w_i|) w_i,
// whose fixed points give P_i = w_i a_i^* / (|w_i| |a_i|) with rho(P M) = beta.
int refine_power(const ComplexMatrix& m, const BlockStructure& st, ComplexVector b, ComplexVector w,
                 int rounds, Candidate& best) {
  int used = 0;
  double prev = -1.0;
  int stalls = 0;
  ComplexVector a(m.rows()), z(m.rows());
  for (; used < rounds; ++used) {
    a = m * b;
    const double an = a.norm();
    if (!(an > 0.0)) break;
    a /= an;
    for (Index i = 0; i < st.count(); ++i) {
      const auto ai = a.segment(st.col_offset(i), st[i].cols);
      const double wi = w.segment(st.row_offset(i), st[i].rows).norm();
      const double ain = ai.norm();
      z.segment(st.col_offset(i), st[i].cols) = ain > 0.0 ? ComplexVector(ai * (wi / ain))
                                                          : ComplexVector::Zero(st[i].cols);
    }
    w = m.adjoint() * z;
    const double wn = w.norm();
    if (!(wn > 0.0)) break;
    w /= wn;
    for (Index i = 0; i < st.count(); ++i) {
      const auto wi = w.segment(st.row_offset(i), st[i].rows);
      const double ain = a.segment(st.col_offset(i), st[i].cols).norm();
      const double win = wi.norm();
      b.segment(st.row_offset(i), st[i].rows) = win > 0.0 ? ComplexVector(wi * (ain / win))
                                                           : ComplexVector::Zero(st[i].rows);
    }
    if (!(b.norm() > 0.0)) break;
    const PartialIsometrySet p = rank_one_isometries(st, a, w);
    if (block_count_nonzero(p) == 0) break;
    const double rho = rho_of(p, m);
    consider(best, p, rho, "power");
    stalls = (std::abs(rho - prev) <= 1e-15 * rho) ? stalls + 1 : 0;
    if (stalls >= 3) break;
    prev = rho;
  }
  return used;
}

// Runs both refinements from a starting P; returns total rounds used.
int refine_from(const ComplexMatrix& m, const BlockStructure& st, const PartialIsometrySet& p0, int rounds,
                Candidate& best) {
  int used = refine_alternating(m, st, p0, rounds, best);
  const EigenPair ep = spectral_radius(assemble(p0) * m);
  if (ep.radius > 0.0) used += refine_power(m, st, ep.vector, ep.vector, rounds, best);
  return used;
}

// Minimizes sum_i (v^* G_i v)^2 over the unit sphere of C^r.
double kernel_search(const std::vector<ComplexMatrix>& g, Index r, std::uint64_t seed, ComplexVector& best_v) {
  auto objective = [&](const ComplexVector& v) {
    double f = 0.0;
    for (const auto& gi : g) {
      const double q = (v.adjoint() * gi * v)(0, 0).real();
      f += q * q;
    }
    return f;
  };
  if (r == 1) {
    best_v = ComplexVector::Ones(1);
    return objective(best_v);
  }
  std::mt19937_64 rng(seed);
  double best = kInf;
  for (int start = 0; start < 16; ++start) {
    ComplexVector v = start == 0 ? ComplexVector(ComplexVector::Unit(r, 0)) : random_unit(r, rng);
    double f = objective(v);
    // Gauss-Newton on the residuals q_i = v^* G_i v: minimum-norm real step
    // with dq_i = 2 Re((G_i v)^* dv), kept tangent to the sphere.
    for (int it = 0; it < 200 && f > 1e-30; ++it) {
      const Index m = static_cast<Index>(g.size());
      Eigen::MatrixXd jac(m + 1, 2 * r);
      Eigen::VectorXd rhs(m + 1);
      for (Index i = 0; i < m; ++i) {
        const ComplexVector w = g[static_cast<std::size_t>(i)] * v;
        jac.row(i) << 2.0 * w.real().transpose(), 2.0 * w.imag().transpose();
        rhs(i) = -(v.adjoint() * w)(0, 0).real();
      }
      jac.row(m) << v.real().transpose(), v.imag().transpose();
      rhs(m) = 0.0;
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(rhs);
      ComplexVector dv(r);
      for (Index k = 0; k < r; ++k) dv(k) = Complex(step(k), step(r + k));
      bool moved = false;
      for (double t = 1.0; t > 1e-6; t *= 0.5) {
        ComplexVector cand = v + t * dv;
        cand /= cand.norm();
        const double fc = objective(cand);
        if (fc < f) {
          v = cand;
          f = fc;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (f < best) {
      best = f;
      best_v = v;
    }
    if (best <= 1e-30) break;
  }
  return best;
}

PartialIsometrySet rotate_to_positive(PartialIsometrySet p, const ComplexMatrix& m) {
  const EigenPair ep = spectral_radius(assemble(p) * m);
  if (ep.radius > 0.0) {
    const Complex phase = std::conj(ep.eigenvalue / ep.radius);
    for (auto& b : p) b *= phase;
  }
  return p;
}

}  // namespace

// ------------------------------------------------------------- public API

void check_mu_shape(const ComplexMatrix& m, const BlockStructure& st) {
  if (m.rows() != st.total_cols() || m.cols() != st.total_rows()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols() << " but structure " << st.to_string()
       << " requires " << st.total_cols() << "x" << st.total_rows()
       << " (rows = sum of block columns k_i, columns = sum of block rows p_i)";
    throw InputError(os.str());
  }
  require_finite(m, "M");
}

ScaleMatrices scale_matrices(const ScalingVector& x, const BlockStructure& st) {
  check_scaling(st, x);
  ScaleMatrices out;
  out.d1 = row_exponents(st, x).array().exp().matrix().cast<Complex>().asDiagonal();
  out.d2 = col_exponents(st, x).array().exp().matrix().cast<Complex>().asDiagonal();
  return out;
}

ComplexMatrix scaled_matrix(const ComplexMatrix& m, const BlockStructure& st, const ScalingVector& x) {
  check_mu_shape(m, st);
  check_scaling(st, x);
  const RealVector rx = row_exponents(st, x), cx = col_exponents(st, x);
  ComplexMatrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = m(i, j) * std::exp(rx(i) - cx(j));
  }
  return out;
}

double scaled_sigma(const ComplexMatrix& m, const BlockStructure& st, const ScalingVector& x) {
  return sigma_max(scaled_matrix(m, st, x));
}

SigmaGradient scaled_sigma_gradient(const ComplexMatrix& m, const BlockStructure& st, const ScalingVector& x) {
  const ComplexMatrix mx = scaled_matrix(m, st, x);
  Eigen::JacobiSVD<ComplexMatrix> jac(mx, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SigmaGradient out;
  const RealVector& s = jac.singularValues();
  out.sigma = s(0);
  out.nonsmooth = count_tied_with_max(s, tol::kMultiplicity) > 1;
  const ComplexVector u = jac.matrixU().col(0);  // k-space: alpha blocks
  const ComplexVector v = jac.matrixV().col(0);  // p-space: beta blocks
  out.values.resize(st.count());
  for (Index i = 0; i < st.count(); ++i) {
    const double alpha = u.segment(st.col_offset(i), st[i].cols).squaredNorm();
    const double beta = v.segment(st.row_offset(i), st[i].rows).squaredNorm();
    out.values(i) = out.sigma * (alpha - beta);
  }
  return out;
}

UpperBound mu_upper(const ComplexMatrix& m, const BlockStructure& st, const MuOptions& opts) {
  check_mu_shape(m, st);
  UpperBound out;
  out.x_star = ScalingVector::Zero(st.count());
  const SigmaGradient at_zero = scaled_sigma_gradient(m, st, out.x_star);
  out.value = at_zero.sigma;
  out.simple_at_optimum = !at_zero.nonsmooth;
  out.gradient_norm = at_zero.values.norm();
  out.starts = 1;
  if (st.count() == 1 || at_zero.sigma == 0.0) {
    // One block: x only shifts along the gauge direction.
    out.gradient_norm = 0.0;
    return out;
  }

  ScaledSigmaObjective obj(m, st);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const int starts = std::max(1, opts.starts);
  for (int s = 0; s < starts; ++s) {
    RealVector y0 = RealVector::Zero(obj.dim());
    if (s > 0) for (Index i = 0; i < y0.size(); ++i) y0(i) = uni(rng);
    LocalResult local = quasi_newton(obj, y0, opts);
    out.iterations += local.iterations;
    out.simplex_switches += local.used_simplex;
    if (local.value < out.value) {
      out.value = local.value;
      out.x_star = obj.full(local.y);
    }
  }
  out.starts = starts;
  const SigmaGradient at_star = scaled_sigma_gradient(m, st, out.x_star);
  out.simple_at_optimum = !at_star.nonsmooth;
  out.gradient_norm = at_star.values.tail(st.count() - 1).norm();
  return out;
}

PartialIsometrySet rank_one_isometries(const BlockStructure& st, const ComplexVector& in_k,
                                       const ComplexVector& out_p) {
  PartialIsometrySet p;
  p.reserve(static_cast<std::size_t>(st.count()));
  const double floor_in = 1e-14 * std::max(in_k.norm(), 1e-300);
  const double floor_out = 1e-14 * std::max(out_p.norm(), 1e-300);
  for (Index i = 0; i < st.count(); ++i) {
    const ComplexVector x = in_k.segment(st.col_offset(i), st[i].cols);
    const ComplexVector y = out_p.segment(st.row_offset(i), st[i].rows);
    const double xn = x.norm(), yn = y.norm();
    if (xn <= floor_in || yn <= floor_out) {
      p.push_back(ComplexMatrix::Zero(st[i].rows, st[i].cols));
    } else {
      p.push_back((y / yn) * (x / xn).adjoint());
    }
  }
  return p;
}

ComplexMatrix assemble(const PartialIsometrySet& p) { return block_diagonal(p); }

CertificateExtraction extract_certificate(const ComplexMatrix& m, const BlockStructure& st,
                                          const ScalingVector& x_star, std::uint64_t seed) {
  CertificateExtraction out;
  out.kernel_residual = kInf;
  const ComplexMatrix mx = scaled_matrix(m, st, x_star);
  Eigen::JacobiSVD<ComplexMatrix> jac(mx, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = jac.singularValues();
  if (!(s(0) > 0.0)) return out;

  // The optimizer only gets near a tie; widen the grouping until the
  // joint numerical range of the G_i reaches zero.
  Index tried = 0;
  for (double group_tol : {tol::kMultiplicity, 1e-6, 1e-4}) {
    const Index r = count_tied_with_max(s, group_tol);
    if (r == tried) continue;
    tried = r;
    const ComplexMatrix u1 = jac.matrixU().leftCols(r);
    const ComplexMatrix v1 = jac.matrixV().leftCols(r);
    std::vector<ComplexMatrix> g;
    for (Index i = 0; i < st.count(); ++i) {
      const ComplexMatrix alpha = u1.middleRows(st.col_offset(i), st[i].cols);
      const ComplexMatrix beta = v1.middleRows(st.row_offset(i), st[i].rows);
      g.push_back(alpha.adjoint() * alpha - beta.adjoint() * beta);
    }
    ComplexVector v;
    const double residual = kernel_search(g, r, seed, v);
    if (residual < out.kernel_residual) {
      out.kernel_residual = residual;
      out.subspace_dim = r;
    }
    if (residual <= 1e-8) {
      // beta_i v = P_i alpha_i v, blockwise.
      PartialIsometrySet p = rank_one_isometries(st, u1 * v, v1 * v);
      if (block_count_nonzero(p) == 0) continue;
      out.p = rotate_to_positive(std::move(p), m);
      out.subspace_dim = r;
      out.kernel_residual = residual;
      return out;
    }
  }
  return out;
}

LowerBound mu_lower(const ComplexMatrix& m, const BlockStructure& st, const MuOptions& opts,
                    const ScalingVector* x_star) {
  check_mu_shape(m, st);
  Candidate best;
  int rounds = 0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return {};

  const ScalingVector x0 = x_star ? *x_star : ScalingVector::Zero(st.count());
  const CertificateExtraction cert = extract_certificate(m, st, x0, opts.seed);
  if (cert.p) {
    consider(best, *cert.p, rho_of(*cert.p, m), st.count() == 1 ? "unstructured" : "certificate");
    rounds += refine_from(m, st, *cert.p, opts.refine_rounds, best);
  }

  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < std::max(1, opts.starts); ++s) {
    const ComplexVector a = random_unit(m.rows(), rng);
    const ComplexVector w = random_unit(m.cols(), rng);
    const PartialIsometrySet p0 = rank_one_isometries(st, a, w);
    if (block_count_nonzero(p0) == 0) continue;
    consider(best, p0, rho_of(p0, m), "random");
    rounds += refine_from(m, st, p0, opts.refine_rounds, best);
  }

  LowerBound out;
  out.value = best.value;
  out.source = best.source;
  out.rounds = rounds;
  if (best.value > 0.0) out.p = rotate_to_positive(best.p, m);
  return out;
}

DeltaCertificate certificate_to_delta(const PartialIsometrySet& p, const ComplexMatrix& m) {
  const ComplexMatrix pm = assemble(p) * m;
  const EigenPair ep = spectral_radius(pm);
  if (!(ep.radius > 0.0)) throw NumericError("certificate_to_delta: rho(P M) = 0, no certificate");
  DeltaCertificate out;
  out.eigenvalue = ep.eigenvalue;
  for (const auto& b : p) out.blocks.push_back(b / ep.eigenvalue);
  out.norm = max_block_sigma(out.blocks);
  const ComplexMatrix delta = assemble(out.blocks);
  out.residual = sigma_min(ComplexMatrix::Identity(delta.rows(), delta.rows()) - delta * m);
  return out;
}

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::exact_n_le_3: return "exact_n_le_3";
    case Exactness::exact_simple_sigma: return "exact_simple_sigma";
    case Exactness::bracket_only: return "bracket_only";
  }
  return "bracket_only";
}

MuResult compute_mu(const ComplexMatrix& m, const BlockStructure& st, const MuOptions& opts) {
  check_mu_shape(m, st);
  MuResult out;
  out.exactness = st.count() <= 3 ? Exactness::exact_n_le_3 : Exactness::bracket_only;
  const double scale = sigma_max(m);
  if (!(scale > 0.0)) {
    out.possibly_zero = true;
    out.upper_detail.x_star = ScalingVector::Zero(st.count());
    out.lower_source = "zero";
    return out;
  }

  // Work on a unit-norm, phase-normalized copy so that bounds(c M) and
  // bounds(M) follow the same iterates.
  Index bi = 0, bj = 0;
  m.cwiseAbs().maxCoeff(&bi, &bj);
  const Complex phase = m(bi, bj) / std::abs(m(bi, bj));
  const ComplexMatrix normalized = m * (std::conj(phase) / scale);

  out.upper_detail = mu_upper(normalized, st, opts);
  out.upper = out.upper_detail.value * scale;

  const LowerBound lower = mu_lower(normalized, st, opts, &out.upper_detail.x_star);
  out.lower_source = lower.source;
  out.lower_rounds = lower.rounds;
  if (lower.value > 0.0) {
    out.certificate_p = rotate_to_positive(lower.p, m);
    out.certificate_delta = certificate_to_delta(out.certificate_p, m);
    out.lower = std::abs(out.certificate_delta->eigenvalue);
  }

  if (st.count() > 3 && out.upper_detail.simple_at_optimum &&
      out.upper_detail.gradient_norm <= 1e-6 * out.upper_detail.value) {
    out.exactness = Exactness::exact_simple_sigma;
  }
  out.possibly_zero = out.lower <= 1e-12 && out.upper <= 1e-12 * scale;
  return out;
}

}  // namespace rbmu
