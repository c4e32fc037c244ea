#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rbmu/backward_error.hpp"
#include "rbmu/error.hpp"

using namespace rbmu;
using testing::real_matrix;

namespace {

RosenbrockSystem scalar_diagonal() {
  return RosenbrockSystem(real_matrix(1, 1, {2}), real_matrix(1, 1, {0}), real_matrix(1, 1, {0}),
                          {real_matrix(1, 1, {1})});
}

void check_certificate(const RosenbrockSystem& sys, const BackwardErrorResult& r) {
  CHECK(r.eta_lower <= r.eta_upper);
  if (!r.certificate) return;
  const double s_norm = norm2(evaluate(sys, r.lambda));
  CHECK(r.residual <= 1e-8 * s_norm);
  CHECK(sigma_min(evaluate(sys, r.lambda) - *r.certificate) <= 1e-8 * s_norm);
  if (r.eta_upper > 0) CHECK(std::abs(r.certificate_norm - r.eta_upper) <= 1e-9 * r.eta_upper);
  double block_max = 0.0;
  for (const auto& b : r.certificate_blocks) block_max = std::max(block_max, sigma_max(b.matrix));
  CHECK(block_max == doctest::Approx(r.certificate_norm).epsilon(1e-12));
}

}  // namespace

TEST_CASE("diagonal system at lambda = 0, A only") {
  const RosenbrockSystem sys = scalar_diagonal();
  const BackwardErrorResult r = backward_error(sys, 0.0, Scenario::parse("A"));
  CHECK(r.kind == EtaKind::exact);
  CHECK(r.eta_lower == doctest::Approx(2.0));
  CHECK(r.eta_upper == doctest::Approx(2.0));
  REQUIRE(r.certificate);
  CHECK(r.certificate->isApprox(real_matrix(2, 2, {2, 0, 0, 0})));
  CHECK(r.residual <= 1e-15);
  REQUIRE(r.certificate_blocks.size() == 1);
  CHECK(r.certificate_blocks[0].label.to_string() == "A");
}

TEST_CASE("an eigenvalue gives zero in every scenario") {
  const auto table = scenario_sweep(scalar_diagonal(), 2.0);
  REQUIRE(table.size() == 15);
  for (const auto& r : table) {
    CHECK(r.kind == EtaKind::eigenvalue);
    CHECK(r.eta_lower == 0.0);
    CHECK(r.eta_upper == 0.0);
    REQUIRE(r.certificate);
    CHECK(r.certificate->isZero());
    CHECK(r.certificate_norm == 0.0);
  }
}

TEST_CASE("diagonal sweep at lambda = 0") {
  const auto table = scenario_sweep(scalar_diagonal(), 0.0);
  CHECK(table[0].scenario.to_string() == "A");
  CHECK(table[0].eta_upper == doctest::Approx(2.0));
  CHECK(table[4].scenario.to_string() == "AB");
  CHECK(table[4].eta_upper <= 2.0 + 1e-8);
}

TEST_CASE("A-only backward error of a diagonal system is the distance to the spectrum") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Complex> a;
    const int r = size(rng);
    for (int i = 0; i < r; ++i) a.push_back(testing::random_complex(rng));
    const Complex lambda = testing::random_complex(rng);
    double expected = INFINITY;
    for (const auto& ai : a) expected = std::min(expected, std::abs(ai - lambda));
    const BackwardErrorResult res = backward_error(diagonal_system(a, 2), lambda, Scenario::parse("A"));
    CHECK(std::abs(res.eta_upper - expected) <= 1e-10 * std::max(1.0, expected));
    CHECK(std::abs(res.eta_lower - expected) <= 1e-10 * std::max(1.0, expected));
  }
}

TEST_CASE("A-unreachable system has infinite A-only backward error") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const RosenbrockSystem sys = a_unreachable_system(testing::random_complex(rng));
    const BackwardErrorResult r = backward_error(sys, testing::random_complex(rng), Scenario::parse("A"));
    CHECK(r.kind == EtaKind::infinite);
    CHECK(std::isinf(r.eta_lower));
    CHECK(std::isinf(r.eta_upper));
    CHECK_FALSE(r.certificate);
  }
}

TEST_CASE("minimal norm solution maps H w back to w") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = random_matrix(3, 2, rng);
    const ComplexMatrix delta = minimal_norm_solution(h);
    CHECK(delta.rows() == 2);
    CHECK(delta.cols() == 3);
    CHECK(sigma_max(delta) == doctest::Approx(1.0 / sigma_max(h)).epsilon(1e-12));
    CHECK(sigma_min(ComplexMatrix::Identity(2, 2) - delta * h) <= 1e-12);
  }
}

TEST_CASE("exact formula agrees with the mu engine on the one-block problem") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const RosenbrockSystem sys = random_system(2, 3, 1, rng);
    const Complex lambda = testing::random_complex(rng);
    for (const char* s : {"A", "B", "C"}) {
      const ReducedProblem p = reduce_to_mu(sys, lambda, Scenario::parse(s));
      const MuResult mu = compute_mu(p.m, p.structure);
      const BackwardErrorResult r = backward_error(sys, lambda, Scenario::parse(s));
      CHECK(std::abs(1.0 / mu.lower - r.eta_upper) <= 1e-9 * r.eta_upper);
      CHECK(std::abs(1.0 / mu.upper - r.eta_lower) <= 1e-9 * r.eta_lower);
    }
  }
}

TEST_CASE("P-only with d = 0 is a single block") {
  std::mt19937_64 rng(11);
  const RosenbrockSystem sys = random_system(2, 2, 0, rng);
  const BackwardErrorResult r = backward_error(sys, 0.3, Scenario::parse("P"));
  CHECK(r.kind == EtaKind::exact);
  check_certificate(sys, r);
}

TEST_CASE("sweep invariants on random systems") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dim(1, 2), deg(0, 1);
  for (int t = 0; t < 12; ++t) {
    const RosenbrockSystem sys = random_system(dim(rng), dim(rng), deg(rng), rng);
    const Complex lambda = testing::random_complex(rng);
    const auto table = scenario_sweep(sys, lambda);
    for (const auto& r : table) check_certificate(sys, r);

    // larger perturbation sets cannot increase the backward error
    for (const auto& small : table)
      for (const auto& big : table) {
        if (!small.scenario.subset_of(big.scenario)) continue;
        CHECK(big.eta_upper <= small.eta_upper + 1e-8);
        CHECK(big.eta_lower <= small.eta_lower + 1e-8);
      }

    // perturbing every block by minus itself is always feasible
    const auto& full = table.back();
    CHECK(full.scenario == Scenario::full());
    CHECK(full.eta_upper <= max_block_norm(sys) + 1e-8);
  }
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(backward_error(scalar_diagonal(), Complex(NAN, 0), Scenario::parse("A")), InputError);
  CHECK_THROWS_AS(backward_error(scalar_diagonal(), 0.0, Scenario{}), InputError);
  CHECK(to_string(EtaKind::infinite) == "infinite");
}
