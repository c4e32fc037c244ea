// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rbmu/backward_error.hpp"
#include "rbmu/cli.hpp"
#include "rbmu/generators.hpp"
#include "rbmu/io.hpp"
#include "rbmu/mu.hpp"
#include "rbmu/oracle.hpp"

using namespace rbmu;

namespace {

int failures = 0;

// Collects the first few violations so a FAIL line says what went wrong.
struct Check {
  bool ok = true;
  std::string detail;
  int violations = 0;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (violations++ < 3) detail += (detail.empty() ? "" : "; ") + what;
  }
};

void report(const std::string& id, const std::string& title, const Check& c, const std::string& summary,
            double seconds) {
  if (!c.ok) ++failures;
  char time[32];
  std::snprintf(time, sizeof time, "%.1fs", seconds);
  std::cout << (c.ok ? "PASS " : "FAIL ") << id << "  " << title << ": " << summary;
  if (!c.ok) std::cout << " [" << c.violations << " violation(s): " << c.detail << "]";
  std::cout << " (" << time << ")" << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

ComplexMatrix golden_matrix() {
  const Complex i(0, 1);
  ComplexMatrix m(5, 5);
  m << i, 0.5 - 0.5 * i, 1., 1., 0.5,
       0.5, -0.5, i, i, 0.5 - 0.5 * i,
       i, 1. - 0.5 * i, 1., 0.5, 0.,
       -0.5, 0.5 + i, -0.5 + 0.5 * i, 1. + 0.5 * i, 0.5 - 0.5 * i,
       0.5 + i, 0.5 + 0.5 * i, 0., -0.5 - 0.5 * i, 0.5 - 0.5 * i;
  return m;
}

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  return {re, g(rng)};
}

BlockStructure random_structure(std::mt19937_64& rng, int blocks, int max_dim) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::vector<BlockShape> shapes;
  for (int i = 0; i < blocks; ++i) shapes.push_back({dim(rng), dim(rng)});
  return BlockStructure(shapes);
}

std::vector<ComplexMatrix> random_blocks(const BlockStructure& st, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> out;
  for (const auto& b : st.blocks()) out.push_back(random_matrix(b.rows, b.cols, rng));
  return out;
}

// sigma_min(S - dS(Delta / lambda_e)) for a random Delta in the scenario's structure.
double det_equivalence_residual(const RosenbrockSystem& sys, Complex lambda, const Scenario& sc,
                                std::mt19937_64& rng) {
  const ReducedProblem p = reduce_to_mu(sys, lambda, sc);
  const auto delta = random_blocks(p.structure, rng);
  const EigenPair e = spectral_radius(block_diagonal(delta) * p.m);
  if (e.radius == 0.0) return 0.0;
  std::vector<ComplexMatrix> scaled;
  for (const auto& b : delta) scaled.push_back(b / e.eigenvalue);
  const ComplexMatrix s = evaluate(sys, lambda);
  return sigma_min(s - embed(p, scaled)) / norm2(s);
}

// ---------------------------------------------------------------- 1

void criterion_golden() {
  const auto t0 = std::chrono::steady_clock::now();
  const MuResult r = compute_mu(golden_matrix(), BlockStructure::parse("2x3,3x2"));
  const double t = seconds_since(t0);
  Check c;
  c.expect(std::abs(r.upper - 3.081980) <= 1e-4, "upper " + num(r.upper, 10) + " not within 1e-4 of 3.081980");
  c.expect(std::abs(r.upper - r.lower) <= 1e-6 * r.upper, "gap " + num((r.upper - r.lower) / r.upper));
  c.expect(r.upper < 3.097070 && r.lower < 3.097070, "not below 3.097070");
  c.expect(t < 5.0, "runtime " + num(t) + " s");
  report("1 ", "golden 5x5 mu, structure 2x3,3x2", c,
         "lower " + num(r.lower, 10) + ", upper " + num(r.upper, 10) + ", " + to_string(r.exactness), t);
}

// ---------------------------------------------------------------- 2

void criterion_fluid_solid() {
  const auto t0 = std::chrono::steady_clock::now();
  const RosenbrockSystem sys = fluid_solid_system(2024);
  const Complex lambda = 0.7;
  Check c;
  std::mt19937_64 rng(2);

  const BackwardErrorResult full = backward_error(sys, lambda, Scenario::full());
  c.expect(full.certificate.has_value(), "no certificate");
  c.expect(full.residual <= 1e-8, "certificate residual " + num(full.residual));
  c.expect(std::abs(full.certificate_norm - full.eta_upper) <= 1e-9 * full.eta_upper, "certificate norm");
  c.expect(full.eta_lower <= full.eta_upper, "eta bracket order");
  c.expect(full.eta_upper <= max_block_norm(sys) + 1e-8, "finiteness cap");
  const MuResult& mu = *full.mu;
  const double gap = (mu.upper - mu.lower) / mu.upper;
  c.expect(gap <= 0.01 || mu.exactness == Exactness::bracket_only, "mu gap " + num(gap));

  // Property suites on this instance.
  for (const auto& sc : all_scenarios()) {
    const double res = det_equivalence_residual(sys, lambda, sc, rng);
    c.expect(res <= 1e-8, "det equivalence " + sc.to_string() + " residual " + num(res));
  }
  const ReducedProblem p = reduce_to_mu(sys, lambda, Scenario::full());
  const Complex scale(-1.3, 0.4);
  const MuResult scaled = compute_mu(scale * p.m, p.structure);
  c.expect(std::abs(scaled.upper - std::abs(scale) * mu.upper) <= 1e-9 * std::abs(scale) * mu.upper, "homogeneity");
  c.expect(std::abs(scaled.lower - std::abs(scale) * mu.lower) <= 1e-9 * std::abs(scale) * mu.lower, "homogeneity");
  c.expect(mu.lower <= mu.upper + 1e-9 * std::max(1.0, mu.upper), "mu bracket order");
  ScalingVector x = ScalingVector::Zero(p.structure.count());
  x << 0, 0.3, -0.2, 0.1, 0.4;
  const SigmaGradient g = scaled_sigma_gradient(p.m, p.structure, x);
  if (!g.nonsmooth) {
    RealVector fd(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      ScalingVector up = x, down = x;
      up(i) += 1e-6;
      down(i) -= 1e-6;
      fd(i) = (scaled_sigma(p.m, p.structure, up) - scaled_sigma(p.m, p.structure, down)) / 2e-6;
    }
    c.expect((g.values - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()), "gradient vs central differences");
  }
  const auto table = scenario_sweep(sys, lambda);
  for (const auto& small : table)
    for (const auto& big : table)
      if (small.scenario.subset_of(big.scenario)) {
        c.expect(big.eta_upper <= small.eta_upper + 1e-8, "monotonicity " + small.scenario.to_string() + " in " +
                                                              big.scenario.to_string());
        c.expect(big.eta_lower <= small.eta_lower + 1e-8, "monotonicity of lower bounds");
      }
  for (const auto& row : table)
    if (row.certificate) c.expect(row.residual <= 1e-8, "sweep certificate residual " + row.scenario.to_string());
  const OracleEstimate o = brute_force_mu(p.m, p.structure, 2000, 3);
  c.expect(o.mu_sampled_lower <= mu.upper + 1e-8, "oracle above mu upper");

  const BackwardErrorResult bc = table[7];
  report("2 ", "fluid-solid instance r=3 n=5 d=1, lambda=0.7, all blocks", c,
         "eta in [" + num(full.eta_lower, 8) + ", " + num(full.eta_upper, 8) + "], mu gap " + num(gap, 3) + " (" +
             to_string(mu.exactness) + "), residual " + num(full.residual, 3) + "; eta(B,C) = " +
             num(bc.eta_upper, 8),
         seconds_since(t0));
}

// ---------------------------------------------------------------- 3

constexpr int kInstances = 50;

void criterion_3a() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 3), deg(0, 2);
  Check c;
  double worst = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const RosenbrockSystem sys = random_system(dim(rng), dim(rng), deg(rng), rng);
    const Complex lambda = random_complex(rng);
    for (const auto& sc : all_scenarios()) {
      const double res = det_equivalence_residual(sys, lambda, sc, rng);
      worst = std::max(worst, res);
      c.expect(res <= 1e-8, "instance " + std::to_string(t) + " " + sc.to_string() + ": " + num(res));
    }
  }
  report("3a", "determinant equivalence, 15 scenarios x 50 systems", c, "worst relative residual " + num(worst, 3),
         seconds_since(t0));
}

void criterion_3b() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> blocks(1, 4);
  std::uniform_real_distribution<double> shift(-5, 5), coord(-2, 2);
  Check c;
  double worst_gauge = 0.0, worst_homog = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    const BlockStructure st = random_structure(rng, blocks(rng), 3);
    const ComplexMatrix m = random_matrix(st.total_cols(), st.total_rows(), rng);
    ScalingVector x(st.count());
    for (Index i = 0; i < x.size(); ++i) x(i) = coord(rng);
    const double a = scaled_sigma(m, st, x);
    const double b = scaled_sigma(m, st, (x.array() + shift(rng)).matrix());
    worst_gauge = std::max(worst_gauge, std::abs(a - b) / a);
    c.expect(std::abs(a - b) <= 1e-12 * a, "gauge at instance " + std::to_string(t));

    const Complex k = random_complex(rng);
    const MuResult r = compute_mu(m, st), s = compute_mu(k * m, st);
    const double eu = std::abs(s.upper - std::abs(k) * r.upper) / (std::abs(k) * r.upper);
    const double el = std::abs(s.lower - std::abs(k) * r.lower) / (std::abs(k) * r.lower);
    worst_homog = std::max({worst_homog, eu, el});
    c.expect(eu <= 1e-9 && el <= 1e-9, "homogeneity at instance " + std::to_string(t) + ": " + num(std::max(eu, el)));
  }
  report("3b", "gauge invariance and homogeneity of mu bounds", c,
         "worst gauge " + num(worst_gauge, 3) + ", worst homogeneity " + num(worst_homog, 3), seconds_since(t0));
}

void criterion_3c() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> blocks(2, 5);
  std::uniform_real_distribution<double> coord(-1, 1);
  Check c;
  int smooth = 0;
  double worst = 0.0;
  while (smooth < kInstances) {
    const BlockStructure st = random_structure(rng, blocks(rng), 3);
    const ComplexMatrix m = random_matrix(st.total_cols(), st.total_rows(), rng);
    ScalingVector x(st.count());
    for (Index i = 0; i < x.size(); ++i) x(i) = i == 0 ? 0.0 : coord(rng);
    if (svd(scaled_matrix(m, st, x)).multiplicity_of_max != 1) continue;
    const SigmaGradient g = scaled_sigma_gradient(m, st, x);
    ++smooth;
    RealVector fd(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      ScalingVector up = x, down = x;
      up(i) += 1e-6;
      down(i) -= 1e-6;
      fd(i) = (scaled_sigma(m, st, up) - scaled_sigma(m, st, down)) / 2e-6;
    }
    const double err = (g.values - fd).norm() / std::max(1.0, fd.norm());
    worst = std::max(worst, err);
    c.expect(err <= 1e-5, "relative error " + num(err));
  }
  report("3c", "analytic gradient vs central differences (h = 1e-6)", c, "worst relative error " + num(worst, 3),
         seconds_since(t0));
}

void criterion_3de() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> small(1, 3), large(4, 5);
  Check order, exact;
  double worst_gap = 0.0;
  for (int t = 0; t < kInstances; ++t) {
    for (const bool few : {true, false}) {
      const BlockStructure st = random_structure(rng, few ? small(rng) : large(rng), 3);
      const ComplexMatrix m = random_matrix(st.total_cols(), st.total_rows(), rng);
      const MuResult r = compute_mu(m, st);
      order.expect(r.lower <= r.upper + 1e-9 * std::max(1.0, r.upper),
                   "lower " + num(r.lower, 12) + " > upper " + num(r.upper, 12));
      if (few) {
        const double gap = (r.upper - r.lower) / std::max(1.0, r.upper);
        worst_gap = std::max(worst_gap, gap);
        exact.expect(gap <= 1e-6, st.to_string() + " gap " + num(gap));
      }
    }
  }
  report("3d", "bracket ordering lower <= upper (1 to 5 blocks)", order, "100 instances", seconds_since(t0));
  report("3e", "exactness for n <= 3 blocks", exact, "worst relative gap " + num(worst_gap, 3), 0.0);
}

void criterion_3f() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> dim(1, 2), deg(0, 1);
  Check c;
  int pairs = 0;
  for (int t = 0; t < kInstances; ++t) {
    const RosenbrockSystem sys = random_system(dim(rng), dim(rng), deg(rng), rng);
    const auto table = scenario_sweep(sys, random_complex(rng));
    for (const auto& small : table)
      for (const auto& big : table) {
        if (small.scenario == big.scenario || !small.scenario.subset_of(big.scenario)) continue;
        ++pairs;
        c.expect(big.eta_upper <= small.eta_upper + 1e-8,
                 "upper " + small.scenario.to_string() + " in " + big.scenario.to_string());
        c.expect(big.eta_lower <= small.eta_lower + 1e-8,
                 "lower " + small.scenario.to_string() + " in " + big.scenario.to_string());
      }
  }
  report("3f", "scenario monotonicity of eta brackets", c, std::to_string(pairs) + " nested pairs", seconds_since(t0));
}

void criterion_3g() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> blocks(2, 3), dim(1, 3);
  Check c;
  double worst_ratio = 1e300;
  int t = 0;
  while (t < kInstances) {
    std::vector<BlockShape> shapes;
    Index p = 0, k = 0;
    const int n = blocks(rng);
    for (int i = 0; i < n; ++i) {
      const BlockShape s{dim(rng), dim(rng)};
      if (p + s.rows > 8 || k + s.cols > 8) break;
      p += s.rows;
      k += s.cols;
      shapes.push_back(s);
    }
    const BlockStructure st(shapes);
    const ComplexMatrix m = random_matrix(k, p, rng);
    const MuResult r = compute_mu(m, st);
    const OracleEstimate o = brute_force_mu(m, st, 5000, static_cast<std::uint64_t>(t));
    c.expect(o.mu_sampled_lower <= r.upper + 1e-8, "oracle above upper at instance " + std::to_string(t));
    const double ratio = o.mu_sampled_lower / r.lower;
    worst_ratio = std::min(worst_ratio, ratio);
    c.expect(ratio >= 0.98, st.to_string() + " ratio " + num(ratio));
    ++t;
  }
  report("3g", "oracle sandwich, budget 5000, dims <= 8", c, "worst oracle / mu_lower " + num(worst_ratio, 8),
         seconds_since(t0));
}

// ---------------------------------------------------------------- 4

void criterion_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> size(1, 5);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<Complex> a;
    const int r = size(rng);
    for (int i = 0; i < r; ++i) a.push_back(random_complex(rng));
    const Complex lambda = random_complex(rng);
    double expected = INFINITY;
    for (const auto& ai : a) expected = std::min(expected, std::abs(ai - lambda));
    const BackwardErrorResult res = backward_error(diagonal_system(a, 2), lambda, Scenario::parse("A"));
    const double err = std::max(std::abs(res.eta_upper - expected), std::abs(res.eta_lower - expected));
    worst = std::max(worst, err);
    c.expect(err <= 1e-10, "diagonal error " + num(err));
  }

  ComplexMatrix m(2, 2);
  m << 0, 2, 3, 0;
  const MuResult six = compute_mu(m, BlockStructure::parse("1x1,1x1"));
  c.expect(std::abs(six.lower - std::sqrt(6.0)) <= 1e-8 && std::abs(six.upper - std::sqrt(6.0)) <= 1e-8,
           "sqrt 6 bracket [" + num(six.lower, 12) + ", " + num(six.upper, 12) + "]");

  int infinite = 0;
  for (int t = 0; t < 10; ++t) {
    const RosenbrockSystem sys = a_unreachable_system(random_complex(rng));
    const BackwardErrorResult res = backward_error(sys, random_complex(rng), Scenario::parse("A"));
    if (res.kind == EtaKind::infinite && std::isinf(res.eta_upper)) ++infinite;
  }
  c.expect(infinite == 10, std::to_string(infinite) + "/10 infinite");
  report("4 ", "closed forms", c,
         "diagonal worst error " + num(worst, 3) + ", sqrt 6 = " + num(six.upper, 12) + ", A-unreachable " +
             std::to_string(infinite) + "/10 infinite",
         seconds_since(t0));
}

// ---------------------------------------------------------------- 5

void criterion_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const auto dir = std::filesystem::temp_directory_path() / "rbmu_acceptance";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> dim(1, 3), deg(0, 2);
  const auto scenarios = all_scenarios();
  double worst_residual = 0.0, worst_norm = 0.0;
  for (int t = 0; t < 100; ++t) {
    const RosenbrockSystem sys = random_system(dim(rng), dim(rng), deg(rng), rng);
    const Complex lambda = random_complex(rng);
    const Scenario& sc = scenarios[static_cast<std::size_t>(t) % scenarios.size()];
    const std::string sys_path = (dir / ("system" + std::to_string(t) + ".json")).string();
    const std::string cert_path = (dir / ("cert" + std::to_string(t) + ".json")).string();
    write_text_file(sys_path, dump(system_to_json(sys)));

    std::ostringstream out, err;
    char lam[80];
    std::snprintf(lam, sizeof lam, "%.17g,%.17g", lambda.real(), lambda.imag());
    const int emit = run_cli({"backward-error", sys_path, "--lambda", lam, "--scenario", sc.to_string(), "--json",
                              "--output", cert_path},
                             out, err);
    c.expect(emit == 0, "emit exit " + std::to_string(emit));
    if (emit != 0 || !std::filesystem::exists(cert_path)) {
      c.expect(false, "triple " + std::to_string(t) + " produced no certificate");
      continue;
    }
    const double reported = Json::parse(out.str())["results"][0]["eta_upper"].get<double>();

    std::ostringstream vout, verr;
    const int code = run_cli({"verify", sys_path, cert_path, "--json"}, vout, verr);
    const Json v = Json::parse(vout.str());
    const double residual = v["residual"].get<double>(), norm = v["norm"].get<double>();
    worst_residual = std::max(worst_residual, residual);
    const double norm_err = reported > 0 ? std::abs(norm - reported) / reported : std::abs(norm);
    worst_norm = std::max(worst_norm, norm_err);
    c.expect(code == 0, "verify exit " + std::to_string(code) + " for " + sc.to_string());
    c.expect(residual <= 1e-8, "residual " + num(residual));
    c.expect(norm_err <= 1e-9, "norm mismatch " + num(norm_err));
  }
  std::filesystem::remove_all(dir);
  report("5 ", "certificate round trip through verify, 100 triples", c,
         "worst residual " + num(worst_residual, 3) + ", worst norm mismatch " + num(worst_norm, 3),
         seconds_since(t0));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> criteria{criterion_golden, criterion_fluid_solid, criterion_3a,
                                                    criterion_3b,     criterion_3c,          criterion_3de,
                                                    criterion_3f,     criterion_3g,          criterion_closed_forms,
                                                    criterion_round_trip};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL    exception: " << e.what() << std::endl;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion line(s) failed")
            << " in " << num(seconds_since(t0), 3) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
