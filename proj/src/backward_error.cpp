#include "rbmu/backward_error.hpp"

#include <cmath>
#include <limits>

#include "rbmu/error.hpp"

namespace rbmu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// mu lower bounds below this are treated as "no certificate".
constexpr double kMuFloor = 1e-12;

void attach_certificate(BackwardErrorResult& out, const RosenbrockSystem& sys, const ReducedProblem& problem,
                        const std::vector<ComplexMatrix>& delta) {
  out.certificate = embed(problem, delta);
  out.certificate_blocks.clear();
  for (std::size_t i = 0; i < delta.size(); ++i) out.certificate_blocks.push_back({problem.embedding[i], delta[i]});
  out.certificate_norm = max_block_sigma(delta);
  out.residual = sigma_min(evaluate(sys, out.lambda) - *out.certificate);
}

}  // namespace

std::string to_string(EtaKind kind) {
  switch (kind) {
    case EtaKind::eigenvalue: return "eigenvalue";
    case EtaKind::exact: return "exact";
    case EtaKind::infinite: return "infinite";
    case EtaKind::mu: return "mu";
  }
  return "mu";
}

ComplexMatrix minimal_norm_solution(const ComplexMatrix& h) {
  const SvdFactors f = svd(h);
  const ComplexVector w = f.right_vectors.col(0);
  const ComplexVector hw = h * w;
  return w * hw.adjoint() / hw.squaredNorm();
}

BackwardErrorResult backward_error(const RosenbrockSystem& sys, Complex lambda, const Scenario& scenario,
                                   const MuOptions& opts) {
  if (scenario.empty()) throw InputError("backward_error: empty scenario");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw InputError("lambda must be finite");

  BackwardErrorResult out;
  out.lambda = lambda;
  out.scenario = scenario;
  const ComplexMatrix s = evaluate(sys, lambda);
  if (!s.allFinite()) throw NumericError("S(lambda) overflows at this lambda");
  out.s_norm = norm2(s);

  if (is_eigenvalue(sys, lambda)) {
    out.kind = EtaKind::eigenvalue;
    out.eta_lower = out.eta_upper = 0.0;
    // No inverse exists here, so only the labels and shapes are needed.
    ReducedProblem shell;
    shell.embedding = scenario_labels(scenario, sys.d());
    std::vector<BlockShape> shapes;
    std::vector<ComplexMatrix> zero;
    for (const auto& l : shell.embedding) {
      shapes.push_back(label_shape(l, sys.r(), sys.n()));
      zero.push_back(ComplexMatrix::Zero(shapes.back().rows, shapes.back().cols));
    }
    shell.structure = BlockStructure(std::move(shapes));
    shell.lambda = lambda;
    shell.r = sys.r();
    shell.n = sys.n();
    attach_certificate(out, sys, shell, zero);
    return out;
  }

  ReducedProblem problem = reduce_to_mu(sys, lambda, scenario);

  if (problem.structure.count() == 1) {
    // A, B, C, or P with d = 0: mu of a single full block is sigma_max.
    const double inverse_norm = 1.0 / sigma_min(s);
    const ExactFormula exact = exact_formula(problem, inverse_norm);
    if (std::isinf(exact.value)) {
      out.kind = EtaKind::infinite;
      out.eta_lower = out.eta_upper = kInf;
      return out;
    }
    out.kind = EtaKind::exact;
    out.eta_lower = out.eta_upper = exact.value;
    attach_certificate(out, sys, problem, {minimal_norm_solution(exact.witness)});
    out.eta_upper = out.certificate_norm;
    out.eta_lower = std::min(out.eta_lower, out.eta_upper);
    return out;
  }

  out.kind = EtaKind::mu;
  MuResult mu = compute_mu(problem.m, problem.structure, opts);
  out.exactness = mu.exactness;
  out.eta_lower = mu.upper > 0.0 ? 1.0 / mu.upper : kInf;
  if (mu.lower > kMuFloor && mu.certificate_delta) {
    attach_certificate(out, sys, problem, mu.certificate_delta->blocks);
    out.eta_upper = out.certificate_norm;
  } else {
    out.eta_upper = kInf;
    out.possibly_infinite = true;
  }
  if (out.eta_lower > out.eta_upper) out.eta_lower = out.eta_upper;
  out.mu = std::move(mu);
  return out;
}

std::vector<BackwardErrorResult> scenario_sweep(const RosenbrockSystem& sys, Complex lambda, const MuOptions& opts) {
  std::vector<BackwardErrorResult> out;
  for (const auto& scenario : all_scenarios()) out.push_back(backward_error(sys, lambda, scenario, opts));
  return out;
}

}  // namespace rbmu
