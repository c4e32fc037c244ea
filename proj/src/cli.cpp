#include "rbmu/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <CLI11.hpp>

#include "rbmu/backward_error.hpp"
#include "rbmu/error.hpp"
#include "rbmu/io.hpp"
#include "rbmu/mu.hpp"
#include "rbmu/oracle.hpp"

namespace rbmu {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

std::string exactness_text(Exactness e) {
  switch (e) {
    case Exactness::exact_n_le_3: return "exact (n<=3)";
    case Exactness::exact_simple_sigma: return "exact (simple sigma_max)";
    case Exactness::bracket_only: return "bracket only";
  }
  return "bracket only";
}

MuOptions mu_options(const RunConfig& cfg) {
  MuOptions opts;
  opts.seed = cfg.seed;
  opts.starts = cfg.starts;
  return opts;
}

Json real_vector_json(const RealVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

// ---- mu

int cmd_mu(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.structure) throw InputError("mu: --structure is required");
  const ComplexMatrix m = mu_matrix_from_json(load_json_file(cfg.input_path));
  const MuResult r = compute_mu(m, *cfg.structure, mu_options(cfg));

  if (cfg.json) {
    Json j;
    j["command"] = "mu";
    j["structure"] = cfg.structure->to_string();
    j["lower"] = number(r.lower);
    j["upper"] = number(r.upper);
    j["exactness"] = to_string(r.exactness);
    j["possibly_zero"] = r.possibly_zero;
    j["lower_source"] = r.lower_source;
    j["x_star"] = real_vector_json(r.upper_detail.x_star);
    if (r.certificate_delta) {
      Json c;
      Json blocks = Json::array();
      for (const auto& b : r.certificate_delta->blocks) blocks.push_back(matrix_to_json(b));
      c["delta_blocks"] = std::move(blocks);
      c["norm"] = number(r.certificate_delta->norm);
      c["residual"] = number(r.certificate_delta->residual);
      j["certificate"] = std::move(c);
    } else {
      j["certificate"] = nullptr;
    }
    out << dump(j);
    return exit_code::ok;
  }

  out << "lower " << fmt(r.lower) << ", upper " << fmt(r.upper) << ", " << exactness_text(r.exactness) << "\n";
  if (r.certificate_delta) {
    out << "certificate: |Delta| = " << fmt(r.certificate_delta->norm)
        << ", sigma_min(I - Delta M) = " << fmt(r.certificate_delta->residual) << "\n";
  } else if (r.possibly_zero) {
    out << "no certificate: mu may be zero\n";
  }
  return exit_code::ok;
}

// ---- backward error and sweep

Json result_json(const BackwardErrorResult& r) {
  Json j;
  j["lambda"] = complex_to_json(r.lambda);
  j["scenario"] = r.scenario.to_string();
  j["kind"] = to_string(r.kind);
  j["eta_lower"] = number(r.eta_lower);
  j["eta_upper"] = number(r.eta_upper);
  j["certified"] = r.certificate ? "upper" : "none";
  j["exactness"] = r.exactness ? Json(to_string(*r.exactness)) : Json(nullptr);
  j["possibly_infinite"] = r.possibly_infinite;
  j["certificate_norm"] = r.certificate ? number(r.certificate_norm) : Json(nullptr);
  j["residual"] = r.certificate ? number(r.residual) : Json(nullptr);
  j["s_norm"] = number(r.s_norm);
  if (r.mu) {
    Json mu;
    mu["lower"] = number(r.mu->lower);
    mu["upper"] = number(r.mu->upper);
    mu["lower_source"] = r.mu->lower_source;
    j["mu"] = std::move(mu);
  }
  return j;
}

std::string eta_text(const BackwardErrorResult& r) {
  switch (r.kind) {
    case EtaKind::eigenvalue: return "eta = 0 (eigenvalue)";
    case EtaKind::exact: return "eta = " + fmt(r.eta_upper) + " (exact)";
    case EtaKind::infinite: return "eta = inf (exact, H = 0)";
    case EtaKind::mu: break;
  }
  std::string s = "eta in [" + fmt(r.eta_lower) + ", " + fmt(r.eta_upper) + "]";
  if (r.certificate) s += ", upper certified";
  if (r.exactness) s += ", " + exactness_text(*r.exactness);
  if (r.possibly_infinite) s += ", possibly infinite";
  return s;
}

CertificateFile certificate_file(const BackwardErrorResult& r) {
  CertificateFile cert;
  cert.lambda = r.lambda;
  cert.scenario = r.scenario;
  cert.delta_blocks = r.certificate_blocks;
  cert.claimed_eta = r.eta_upper;
  cert.residual = r.residual;
  return cert;
}

int cmd_backward_error(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.lambdas.empty()) throw InputError("backward-error: at least one --lambda is required");
  if (!cfg.output_path.empty() && cfg.lambdas.size() != 1)
    throw InputError("backward-error: --output needs exactly one --lambda");
  const RosenbrockSystem sys = system_from_json(load_json_file(cfg.input_path));

  std::vector<BackwardErrorResult> results;
  for (const Complex lambda : cfg.lambdas) results.push_back(backward_error(sys, lambda, cfg.scenario, mu_options(cfg)));

  if (cfg.json) {
    Json j;
    j["command"] = "backward-error";
    Json rs = Json::array();
    for (const auto& r : results) rs.push_back(result_json(r));
    j["results"] = std::move(rs);
    out << dump(j);
  } else {
    for (const auto& r : results) {
      if (results.size() > 1) out << "lambda = " << fmt(r.lambda) << "\n";
      out << eta_text(r) << "\n";
      if (r.certificate)
        out << "certificate: |dS| = " << fmt(r.certificate_norm) << ", sigma_min(S - dS) = " << fmt(r.residual) << "\n";
    }
  }

  if (!cfg.output_path.empty()) {
    const auto& r = results.front();
    if (!r.certificate) {
      err << "no certificate to write: eta is " << (r.kind == EtaKind::infinite ? "infinite" : "not certified") << "\n";
    } else {
      write_text_file(cfg.output_path, dump(certificate_to_json(certificate_file(r))));
    }
  }
  return exit_code::ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.lambdas.empty()) throw InputError("sweep: at least one --lambda is required");
  const RosenbrockSystem sys = system_from_json(load_json_file(cfg.input_path));

  Json all = Json::array();
  for (const Complex lambda : cfg.lambdas) {
    const auto table = scenario_sweep(sys, lambda, mu_options(cfg));
    if (cfg.json) {
      Json j;
      j["lambda"] = complex_to_json(lambda);
      Json rs = Json::array();
      for (const auto& r : table) rs.push_back(result_json(r));
      j["results"] = std::move(rs);
      all.push_back(std::move(j));
      continue;
    }
    char line[128];
    out << "lambda = " << fmt(lambda) << "\n";
    std::snprintf(line, sizeof line, "%-9s%-12s%-14s%-14s%s\n", "scenario", "kind", "eta_lower", "eta_upper",
                  "certified");
    out << line;
    for (const auto& r : table) {
      std::snprintf(line, sizeof line, "%-9s%-12s%-14s%-14s%s\n", r.scenario.to_string().c_str(),
                    to_string(r.kind).c_str(), fmt(r.eta_lower).c_str(), fmt(r.eta_upper).c_str(),
                    r.certificate ? "upper" : "-");
      out << line;
    }
  }
  if (cfg.json) {
    Json j;
    j["command"] = "sweep";
    j["sweeps"] = std::move(all);
    out << dump(j);
  }
  return exit_code::ok;
}

// ---- verify

// Rebuilds dS(lambda) from labeled blocks without going through the reduction.
ComplexMatrix assemble_delta_s(const RosenbrockSystem& sys, const CertificateFile& cert) {
  const Index r = sys.r(), n = sys.n();
  ComplexMatrix ds = ComplexMatrix::Zero(r + n, r + n);
  for (std::size_t i = 0; i < cert.delta_blocks.size(); ++i) {
    const auto& [label, m] = cert.delta_blocks[i];
    const std::string where = "delta_blocks[" + std::to_string(i) + "] (" + label.to_string() + ")";
    Index row = r, col = r, rows = n, cols = n;
    bool allowed = cert.scenario.perturb_p;
    Complex weight = 1.0;
    switch (label.kind) {
      case BlockLabel::Kind::A: row = 0; col = 0; rows = r; cols = r; allowed = cert.scenario.perturb_a; break;
      case BlockLabel::Kind::B: row = 0; col = r; rows = r; cols = n; allowed = cert.scenario.perturb_b; break;
      case BlockLabel::Kind::C: row = r; col = 0; rows = n; cols = r; allowed = cert.scenario.perturb_c; break;
      case BlockLabel::Kind::Coeff:
        if (label.degree > sys.d()) throw InputError(where + ": degree exceeds d = " + std::to_string(sys.d()));
        for (Index k = 0; k < label.degree; ++k) weight *= cert.lambda;
        break;
    }
    if (!allowed) throw InputError(where + ": block not perturbed in scenario " + cert.scenario.to_string());
    if (m.rows() != rows || m.cols() != cols)
      throw InputError(where + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    ds.block(row, col, rows, cols) += weight * m;
  }
  return ds;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const RosenbrockSystem sys = system_from_json(load_json_file(cfg.input_path));
  const CertificateFile cert = certificate_from_json(load_json_file(cfg.certificate_path));
  const ComplexMatrix ds = assemble_delta_s(sys, cert);
  const double residual = sigma_min(evaluate(sys, cert.lambda) - ds);
  double norm = 0.0;
  for (const auto& b : cert.delta_blocks) norm = std::max(norm, sigma_max(b.matrix));
  const bool residual_ok = residual <= cfg.tol;
  const bool norm_ok = std::abs(norm - cert.claimed_eta) <= 1e-9 * std::max(cert.claimed_eta, 1e-300);
  const bool ok = residual_ok && norm_ok;

  if (cfg.json) {
    Json j;
    j["command"] = "verify";
    j["residual"] = number(residual);
    j["norm"] = number(norm);
    j["claimed_eta"] = number(cert.claimed_eta);
    j["tolerance"] = number(cfg.tol);
    j["residual_ok"] = residual_ok;
    j["norm_ok"] = norm_ok;
    j["ok"] = ok;
    out << dump(j);
  } else {
    out << "sigma_min(S - dS) = " << fmt(residual) << " (tol " << fmt(cfg.tol) << "), |dS| = " << fmt(norm)
        << ", claimed " << fmt(cert.claimed_eta) << ": " << (ok ? "ok" : "FAILED") << "\n";
  }
  return ok ? exit_code::ok : exit_code::verify_failed;
}

// ---- oracle

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const Json input = load_json_file(cfg.input_path);
  Json j;
  j["command"] = "oracle";
  if (cfg.structure) {
    const ComplexMatrix m = mu_matrix_from_json(input);
    const OracleEstimate e = brute_force_mu(m, *cfg.structure, cfg.budget, cfg.seed);
    if (!cfg.json) {
      out << "sampled mu lower bound " << fmt(e.mu_sampled_lower) << " (" << e.samples_used << " samples, "
          << e.evaluations << " evaluations)\n";
      return exit_code::ok;
    }
    j["structure"] = cfg.structure->to_string();
    j["mu_sampled_lower"] = number(e.mu_sampled_lower);
    j["samples_used"] = e.samples_used;
    j["evaluations"] = e.evaluations;
  } else {
    if (cfg.lambdas.empty()) throw InputError("oracle: give --structure for a matrix or --lambda for a system");
    const RosenbrockSystem sys = system_from_json(input);
    Json rs = Json::array();
    for (const Complex lambda : cfg.lambdas) {
      const OracleBackwardError e = brute_force_backward_error(sys, lambda, cfg.scenario, cfg.budget, cfg.seed);
      if (!cfg.json) {
        out << "lambda = " << fmt(lambda) << ": sampled eta upper bound " << fmt(e.eta) << " (" << e.samples_used
            << " samples)\n";
        continue;
      }
      Json r;
      r["lambda"] = complex_to_json(lambda);
      r["scenario"] = cfg.scenario.to_string();
      r["eta_sampled_upper"] = number(e.eta);
      r["samples_used"] = e.samples_used;
      rs.push_back(std::move(r));
    }
    if (!cfg.json) return exit_code::ok;
    j["results"] = std::move(rs);
  }
  out << dump(j);
  return exit_code::ok;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "mu") return cmd_mu(cfg, out);
    if (cfg.command == "backward-error") return cmd_backward_error(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "oracle") return cmd_oracle(cfg, out);
    err << "error: unknown command '" << cfg.command << "'\n";
    return exit_code::input_error;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  } catch (const SingularMatrixError& e) {
    err << "numeric failure: " << e.what() << " (sigma_min = " << fmt(e.sigma_min()) << ")\n";
    return exit_code::numeric_failure;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_code::numeric_failure;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured eigenvalue backward errors of Rosenbrock system matrices"};
  app.name("rbmu");
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> lambda_text;
  std::string scenario_text = "ABCP";
  std::string structure_text;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--starts", cfg.starts, "optimizer starts")->check(CLI::PositiveNumber);
    sub->add_flag("--json", cfg.json, "machine-readable output");
  };
  auto lambda_opt = [&](CLI::App* sub) {
    sub->add_option("--lambda", lambda_text, "evaluation point re[,im], repeatable")->allow_extra_args(false);
  };

  auto* mu = app.add_subcommand("mu", "bounds on mu for a matrix file");
  mu->add_option("matrix", cfg.input_path, "matrix JSON")->required();
  mu->add_option("--structure", structure_text, "block shapes p1xk1,p2xk2,...")->required();
  common(mu);

  auto* be = app.add_subcommand("backward-error", "structured eigenvalue backward error");
  be->add_option("system", cfg.input_path, "system JSON")->required();
  lambda_opt(be);
  be->add_option("--scenario", scenario_text, "perturbed blocks, subset of ABCP");
  be->add_option("--output", cfg.output_path, "certificate file to write");
  common(be);

  auto* sweep = app.add_subcommand("sweep", "all 15 scenarios");
  sweep->add_option("system", cfg.input_path, "system JSON")->required();
  lambda_opt(sweep);
  common(sweep);

  auto* verify = app.add_subcommand("verify", "check a certificate file");
  verify->add_option("system", cfg.input_path, "system JSON")->required();
  verify->add_option("certificate", cfg.certificate_path, "certificate JSON")->required();
  verify->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::NonNegativeNumber);
  verify->add_flag("--json", cfg.json, "machine-readable output");

  auto* oracle = app.add_subcommand("oracle", "sampling estimates for cross-checks");
  oracle->add_option("input", cfg.input_path, "matrix JSON (with --structure) or system JSON")->required();
  oracle->add_option("--structure", structure_text, "block shapes p1xk1,p2xk2,...");
  lambda_opt(oracle);
  oracle->add_option("--scenario", scenario_text, "perturbed blocks, subset of ABCP");
  oracle->add_option("--budget", cfg.budget, "number of random directions")->check(CLI::PositiveNumber);
  common(oracle);

  std::vector<const char*> argv{"rbmu"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    for (const auto& t : lambda_text) cfg.lambdas.push_back(parse_lambda(t));
    cfg.scenario = Scenario::parse(scenario_text);
    if (!structure_text.empty()) cfg.structure = BlockStructure::parse(structure_text);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }
  return execute(cfg, out, err);
}

}  // namespace rbmu
