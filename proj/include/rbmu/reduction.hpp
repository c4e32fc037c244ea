#pragma once

// Turns (system, lambda, scenario) into a mu-value problem
//
//   det(S(lambda) - dS(lambda)) = 0  <=>  det(I_p - Delta M) = 0,
//   M = J2 S(lambda)^{-1} [I, lambda I, ..., lambda^d I] J1,
//
// where Delta = diag(blocks of the perturbed labels) and J1, J2 are the 0/1
// selectors that place each block of Delta into its quadrant of dS. The
// single-block scenarios A, B, C have a closed form 1 / sigma_max(H).

#include <string>
#include <variant>
#include <vector>

#include "rbmu/linalg.hpp"
#include "rbmu/rosenbrock.hpp"

namespace rbmu {

struct Scenario {
  bool perturb_a = false;
  bool perturb_b = false;
  bool perturb_c = false;
  bool perturb_p = false;

  /// Parses any nonempty subset string over {A, B, C, P}, e.g. "BC" or "abcp".
  static Scenario parse(const std::string& text);
  static Scenario full() { return {true, true, true, true}; }

  int size() const { return perturb_a + perturb_b + perturb_c + perturb_p; }
  bool empty() const { return size() == 0; }
  /// Canonical label such as "ABP".
  std::string to_string() const;
  /// Every block this scenario perturbs is also perturbed by `other`.
  bool subset_of(const Scenario& other) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The 15 nonempty scenarios, ordered by size then lexicographically.
std::vector<Scenario> all_scenarios();

struct BlockShape {
  Index rows = 0;  // p_i
  Index cols = 0;  // k_i
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

class BlockStructure {
 public:
  BlockStructure() = default;
  /// Throws InputError if any block has a zero dimension or the list is empty.
  explicit BlockStructure(std::vector<BlockShape> blocks);

  /// Parses "p1xk1,p2xk2,...".
  static BlockStructure parse(const std::string& spec);

  const std::vector<BlockShape>& blocks() const { return blocks_; }
  Index count() const { return static_cast<Index>(blocks_.size()); }
  const BlockShape& operator[](Index i) const { return blocks_[static_cast<std::size_t>(i)]; }
  Index total_rows() const { return total_rows_; }  // p
  Index total_cols() const { return total_cols_; }  // k
  /// Offset of block i inside the p-dimensional (row) space of Delta.
  Index row_offset(Index i) const { return row_offsets_[static_cast<std::size_t>(i)]; }
  /// Offset of block i inside the k-dimensional (column) space of Delta.
  Index col_offset(Index i) const { return col_offsets_[static_cast<std::size_t>(i)]; }

  std::string to_string() const;

  friend bool operator==(const BlockStructure& a, const BlockStructure& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  std::vector<BlockShape> blocks_;
  std::vector<Index> row_offsets_, col_offsets_;
  Index total_rows_ = 0, total_cols_ = 0;
};

/// Which coefficient of S(z) a block of Delta perturbs.
struct BlockLabel {
  enum class Kind { A, B, C, Coeff };
  Kind kind = Kind::A;
  Index degree = 0;  // j for Coeff (A_j)

  static BlockLabel coeff(Index j) { return {Kind::Coeff, j}; }
  /// "A", "B", "C", "A0", "A1", ...
  std::string to_string() const;
  static BlockLabel parse(const std::string& text);

  friend bool operator==(const BlockLabel&, const BlockLabel&) = default;
};

struct ReducedProblem {
  ComplexMatrix m;               // k x p
  BlockStructure structure;      // Delta is p x k
  std::vector<BlockLabel> embedding;
  Complex lambda;
  Index r = 0, n = 0;
};

struct ExactFormula {
  double value = 0.0;  // 1 / sigma_max(witness), +inf when the witness vanishes
  ComplexMatrix witness;
  ReducedProblem problem;  // the one-block problem whose M is the witness
};

/// J~1 ((r+n)d x nd) and J~2 (nd x (r+n)); both empty when d == 0.
struct TildeJs {
  ComplexMatrix j1;
  ComplexMatrix j2;
};
TildeJs build_tilde_js(Index r, Index n, Index d);

/// Labels perturbed by a scenario, in the order A, B, C, A_0, ..., A_d.
std::vector<BlockLabel> scenario_labels(const Scenario& scenario, Index d);

/// Shape (p_i, k_i) of the Delta block for a label.
BlockShape label_shape(const BlockLabel& label, Index r, Index n);

/// The selector pair (J1, J2) for a list of labels:
/// J1 is (d+1)(r+n) x p and J2 is k x (r+n).
struct Selectors {
  ComplexMatrix j1;
  ComplexMatrix j2;
};
Selectors build_selectors(const std::vector<BlockLabel>& labels, Index r, Index n, Index d);

/// [I, lambda I, ..., lambda^d I] of size (r+n) x (d+1)(r+n).
ComplexMatrix lambda_powers_row(Complex lambda, Index size, Index d);

/// Always produces the mu-value problem, including for single-block scenarios.
ReducedProblem reduce_to_mu(const RosenbrockSystem& sys, Complex lambda, const Scenario& scenario);

/// Scenarios A, B, C give an ExactFormula; the rest give a ReducedProblem.
/// Throws SingularMatrixError when S(lambda) is numerically singular.
std::variant<ReducedProblem, ExactFormula> reduce(const RosenbrockSystem& sys, Complex lambda,
                                                  const Scenario& scenario);

/// Closed form for a one-block problem. Infinite iff sigma_max(H) <= 1e-14 * ||S^{-1}||.
ExactFormula exact_formula(const ReducedProblem& problem, double inverse_norm);

/// Places the Delta blocks into dS(lambda); the P quadrant receives sum_j lambda^j Delta_{A_j}.
ComplexMatrix embed(const ReducedProblem& problem, const std::vector<ComplexMatrix>& delta);

/// max_i sigma_max(Delta_i).
double max_block_sigma(const std::vector<ComplexMatrix>& blocks);

}  // namespace rbmu
