#pragma once

// Bounds on the structured singular value of a rectangular M (k x p) under
// block-diagonal Delta = diag(Delta_1, ..., Delta_n), Delta_i of size p_i x k_i:
//
//   sup_{P partial isometry} rho(P M) = mu(M) <= inf_x sigma_max(D1(x) M D2(-x)).
//
// The upper bound is minimized over the scaling vector x; the lower bound is
// any rho(P M) we can find, starting from the certificate read off the
// optimal scaling and refined by power-type iterations. Every lower bound
// comes with an explicit P, hence an explicit Delta with det(I - Delta M) = 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbmu/linalg.hpp"
#include "rbmu/reduction.hpp"

namespace rbmu {

struct MuOptions {
  int starts = 8;             // optimizer starts: x = 0 plus (starts - 1) random draws
  int max_iters = 400;        // quasi-Newton iterations per start
  double grad_tol = 1e-9;     // relative to sigma
  std::uint64_t seed = 20240917;
  int refine_rounds = 200;    // lower-bound iteration rounds per seed
};

inline constexpr double kMaxScaling = 40.0;

/// x has one entry per block; by convention x[0] == 0.
using ScalingVector = RealVector;

struct ScaleMatrices {
  ComplexMatrix d1;  // k x k, diag(e^{x_i} I_{k_i})
  ComplexMatrix d2;  // p x p, diag(e^{x_i} I_{p_i})
};
ScaleMatrices scale_matrices(const ScalingVector& x, const BlockStructure& structure);

/// D1(x) M D2(-x). Throws InputError if |x_i| > 40 or shapes disagree.
ComplexMatrix scaled_matrix(const ComplexMatrix& m, const BlockStructure& structure,
                            const ScalingVector& x);
double scaled_sigma(const ComplexMatrix& m, const BlockStructure& structure, const ScalingVector& x);

struct SigmaGradient {
  double sigma = 0.0;
  bool nonsmooth = false;  // sigma_max is repeated; `values` is then one subgradient
  RealVector values;       // d sigma / d x_i = sigma (||alpha_i||^2 - ||beta_i||^2)
};
SigmaGradient scaled_sigma_gradient(const ComplexMatrix& m, const BlockStructure& structure,
                                    const ScalingVector& x);

struct UpperBound {
  double value = 0.0;
  ScalingVector x_star;
  bool simple_at_optimum = false;
  double gradient_norm = 0.0;  // at x_star; meaningful when simple
  int iterations = 0;
  int starts = 0;
  int simplex_switches = 0;
};
UpperBound mu_upper(const ComplexMatrix& m, const BlockStructure& structure, const MuOptions& opts = {});

using PartialIsometrySet = std::vector<ComplexMatrix>;

struct LowerBound {
  double value = 0.0;
  PartialIsometrySet p;  // empty when value == 0
  std::string source;    // "certificate", "alternating", "power", "unstructured"
  int rounds = 0;
};
/// `x_star` (optional) seeds the certificate candidate.
LowerBound mu_lower(const ComplexMatrix& m, const BlockStructure& structure, const MuOptions& opts = {},
                    const ScalingVector* x_star = nullptr);

struct CertificateExtraction {
  std::optional<PartialIsometrySet> p;  // nullopt: joint-range obstruction
  Index subspace_dim = 0;
  double kernel_residual = 0.0;  // min sum_i (v* G_i v)^2 with G_i = alpha_i* alpha_i - beta_i* beta_i
};
CertificateExtraction extract_certificate(const ComplexMatrix& m, const BlockStructure& structure,
                                          const ScalingVector& x_star, std::uint64_t seed = 1);

/// Rank-one partial isometries from block vectors: P_i = out_i in_i^* / (|out_i| |in_i|).
PartialIsometrySet rank_one_isometries(const BlockStructure& structure, const ComplexVector& in_k,
                                       const ComplexVector& out_p);

ComplexMatrix assemble(const PartialIsometrySet& p);

struct DeltaCertificate {
  std::vector<ComplexMatrix> blocks;
  Complex eigenvalue;  // dominant eigenvalue of P M
  double norm = 0.0;      // max_i sigma_max(Delta_i)
  double residual = 0.0;  // sigma_min(I - Delta M)
};
/// Delta = P / lambda_e for the dominant eigenvalue of P M. Throws NumericError if rho(PM) == 0.
DeltaCertificate certificate_to_delta(const PartialIsometrySet& p, const ComplexMatrix& m);

enum class Exactness { exact_n_le_3, exact_simple_sigma, bracket_only };
std::string to_string(Exactness e);

struct MuResult {
  double lower = 0.0;
  double upper = 0.0;
  PartialIsometrySet certificate_p;
  std::optional<DeltaCertificate> certificate_delta;
  Exactness exactness = Exactness::bracket_only;
  bool possibly_zero = false;
  UpperBound upper_detail;
  std::string lower_source;
  int lower_rounds = 0;
};

/// Full bracket with certificate. M must be k x p for the given structure.
MuResult compute_mu(const ComplexMatrix& m, const BlockStructure& structure, const MuOptions& opts = {});

/// Throws InputError unless M is (total_cols x total_rows) of the structure.
void check_mu_shape(const ComplexMatrix& m, const BlockStructure& structure);

}  // namespace rbmu
