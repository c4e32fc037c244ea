#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbmu/mu.hpp"
#include "rbmu/reduction.hpp"
#include "rbmu/rosenbrock.hpp"

namespace rbmu {

enum class EtaKind {
  eigenvalue,  // lambda is an eigenvalue, eta = 0
  exact,       // closed form 1 / sigma_max(H), or a one-block mu problem
  infinite,    // closed form with H = 0
  mu,          // bracket from the mu engine
};
std::string to_string(EtaKind kind);

struct LabeledBlock {
  BlockLabel label;
  ComplexMatrix matrix;
};

struct BackwardErrorResult {
  Complex lambda;
  Scenario scenario;
  EtaKind kind = EtaKind::mu;
  // The certified side is eta_upper: it is realized by `certificate`.
  double eta_lower = 0.0;
  double eta_upper = 0.0;
  std::optional<ComplexMatrix> certificate;  // dS(lambda)
  std::vector<LabeledBlock> certificate_blocks;
  double certificate_norm = 0.0;  // max block spectral norm
  double residual = 0.0;          // sigma_min(S(lambda) - dS(lambda))
  double s_norm = 0.0;            // ||S(lambda)||
  std::optional<Exactness> exactness;  // for mu scenarios
  bool possibly_infinite = false;
  std::optional<MuResult> mu;
};

BackwardErrorResult backward_error(const RosenbrockSystem& sys, Complex lambda, const Scenario& scenario,
                                   const MuOptions& opts = {});

/// One result per nonempty scenario, ordered by size then lexicographically.
std::vector<BackwardErrorResult> scenario_sweep(const RosenbrockSystem& sys, Complex lambda,
                                                const MuOptions& opts = {});

/// Minimal-norm Delta with Delta (H w) = w for the top right singular vector w of H:
/// Delta = w (H w)^* / |H w|^2, of norm 1 / sigma_max(H).
ComplexMatrix minimal_norm_solution(const ComplexMatrix& h);

}  // namespace rbmu
