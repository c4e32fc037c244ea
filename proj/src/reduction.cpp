#include "rbmu/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "rbmu/error.hpp"

namespace rbmu {

// ---------------------------------------------------------------- Scenario

Scenario Scenario::parse(const std::string& text) {
  Scenario s;
  for (char ch : text) {
    switch (std::toupper(static_cast<unsigned char>(ch))) {
      case 'A': s.perturb_a = true; break;
      case 'B': s.perturb_b = true; break;
      case 'C': s.perturb_c = true; break;
      case 'P': s.perturb_p = true; break;
      case ',':
      case ' ': break;
      default:
        throw InputError("scenario '" + text + "': unexpected character '" + std::string(1, ch) +
                         "' (use a subset of A, B, C, P)");
    }
  }
  if (s.empty()) throw InputError("scenario '" + text + "': at least one block must be perturbed");
  return s;
}

std::string Scenario::to_string() const {
  std::string out;
  if (perturb_a) out += 'A';
  if (perturb_b) out += 'B';
  if (perturb_c) out += 'C';
  if (perturb_p) out += 'P';
  return out;
}

bool Scenario::subset_of(const Scenario& other) const {
  return (!perturb_a || other.perturb_a) && (!perturb_b || other.perturb_b) &&
         (!perturb_c || other.perturb_c) && (!perturb_p || other.perturb_p);
}

std::vector<Scenario> all_scenarios() {
  std::vector<Scenario> out;
  for (int mask = 1; mask < 16; ++mask) {
    out.push_back({bool(mask & 1), bool(mask & 2), bool(mask & 4), bool(mask & 8)});
  }
  std::sort(out.begin(), out.end(), [](const Scenario& x, const Scenario& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x.to_string() < y.to_string();
  });
  return out;
}

// ---------------------------------------------------------- BlockStructure

BlockStructure::BlockStructure(std::vector<BlockShape> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InputError("block structure: no blocks");
  for (const auto& b : blocks_) {
    if (b.rows < 1 || b.cols < 1) throw InputError("block structure: block dimensions must be >= 1");
    row_offsets_.push_back(total_rows_);
    col_offsets_.push_back(total_cols_);
    total_rows_ += b.rows;
    total_cols_ += b.cols;
  }
}

BlockStructure BlockStructure::parse(const std::string& spec) {
  std::vector<BlockShape> blocks;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find_first_of("xX");
    if (x == std::string::npos) throw InputError("structure '" + spec + "': expected items like 2x3");
    try {
      std::size_t used_p = 0, used_k = 0;
      const std::string ps = item.substr(0, x), ks = item.substr(x + 1);
      const long p = std::stol(ps, &used_p);
      const long k = std::stol(ks, &used_k);
      if (used_p != ps.size() || used_k != ks.size()) throw std::invalid_argument(item);
      blocks.push_back({static_cast<Index>(p), static_cast<Index>(k)});
    } catch (const std::logic_error&) {
      throw InputError("structure '" + spec + "': cannot parse block '" + item + "'");
    }
  }
  return BlockStructure(std::move(blocks));
}

std::string BlockStructure::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << ',';
    os << blocks_[i].rows << 'x' << blocks_[i].cols;
  }
  return os.str();
}

// -------------------------------------------------------------- BlockLabel

std::string BlockLabel::to_string() const {
  switch (kind) {
    case Kind::A: return "A";
    case Kind::B: return "B";
    case Kind::C: return "C";
    case Kind::Coeff: return "A" + std::to_string(degree);
  }
  return "?";
}

BlockLabel BlockLabel::parse(const std::string& text) {
  if (text == "A") return {Kind::A, 0};
  if (text == "B") return {Kind::B, 0};
  if (text == "C") return {Kind::C, 0};
  if (text.size() >= 2 && text[0] == 'A' &&
      std::all_of(text.begin() + 1, text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return coeff(std::stol(text.substr(1)));
  }
  throw InputError("unknown block label '" + text + "'");
}

// -------------------------------------------------------------- selectors

TildeJs build_tilde_js(Index r, Index n, Index d) {
  TildeJs out;
  out.j1 = ComplexMatrix::Zero((r + n) * d, n * d);
  out.j2 = ComplexMatrix::Zero(n * d, r + n);
  for (Index j = 0; j < d; ++j) {
    out.j1.block(j * (r + n) + r, j * n, n, n).setIdentity();
    out.j2.block(j * n, r, n, n).setIdentity();
  }
  return out;
}

std::vector<BlockLabel> scenario_labels(const Scenario& scenario, Index d) {
  std::vector<BlockLabel> labels;
  if (scenario.perturb_a) labels.push_back({BlockLabel::Kind::A, 0});
  if (scenario.perturb_b) labels.push_back({BlockLabel::Kind::B, 0});
  if (scenario.perturb_c) labels.push_back({BlockLabel::Kind::C, 0});
  if (scenario.perturb_p) {
    for (Index j = 0; j <= d; ++j) labels.push_back(BlockLabel::coeff(j));
  }
  return labels;
}

BlockShape label_shape(const BlockLabel& label, Index r, Index n) {
  switch (label.kind) {
    case BlockLabel::Kind::A: return {r, r};
    case BlockLabel::Kind::B: return {r, n};
    case BlockLabel::Kind::C: return {n, r};
    case BlockLabel::Kind::Coeff: return {n, n};
  }
  return {};
}

namespace {

// Row range of S(z) that a label's block occupies, and its column range.
// A: rows [0,r) cols [0,r); B: rows [0,r) cols [r,r+n);
// C: rows [r,r+n) cols [0,r); A_j: rows [r,r+n) cols [r,r+n).
Index quadrant_row(const BlockLabel& l, Index r) {
  return (l.kind == BlockLabel::Kind::A || l.kind == BlockLabel::Kind::B) ? 0 : r;
}
Index quadrant_col(const BlockLabel& l, Index r) {
  return (l.kind == BlockLabel::Kind::A || l.kind == BlockLabel::Kind::C) ? 0 : r;
}

}  // namespace

Selectors build_selectors(const std::vector<BlockLabel>& labels, Index r, Index n, Index d) {
  Index p = 0, k = 0;
  for (const auto& l : labels) {
    const auto shape = label_shape(l, r, n);
    p += shape.rows;
    k += shape.cols;
  }
  Selectors out;
  out.j1 = ComplexMatrix::Zero((d + 1) * (r + n), p);
  out.j2 = ComplexMatrix::Zero(k, r + n);

  // Coefficients A_1..A_d share the tilde-J pattern; copy columns from it.
  const TildeJs tilde = build_tilde_js(r, n, d);

  Index col = 0, row = 0;
  for (const auto& l : labels) {
    const auto shape = label_shape(l, r, n);
    if (l.kind == BlockLabel::Kind::Coeff && l.degree >= 1) {
      if (l.degree > d) throw InputError("label " + l.to_string() + " exceeds the polynomial degree");
      const Index j = l.degree - 1;
      out.j1.block(r + n, col, (r + n) * d, n) = tilde.j1.middleCols(j * n, n);
      out.j2.block(row, 0, n, r + n) = tilde.j2.middleRows(j * n, n);
    } else {
      // Degree-zero chunk: identity at the quadrant offsets.
      out.j1.block(quadrant_row(l, r), col, shape.rows, shape.rows).setIdentity();
      out.j2.block(row, quadrant_col(l, r), shape.cols, shape.cols).setIdentity();
    }
    col += shape.rows;
    row += shape.cols;
  }
  return out;
}

ComplexMatrix lambda_powers_row(Complex lambda, Index size, Index d) {
  ComplexMatrix out = ComplexMatrix::Zero(size, size * (d + 1));
  Complex power(1.0, 0.0);
  for (Index j = 0; j <= d; ++j) {
    out.block(0, j * size, size, size) = power * ComplexMatrix::Identity(size, size);
    power *= lambda;
  }
  return out;
}

// --------------------------------------------------------------- reduce

namespace {

ReducedProblem reduce_with_inverse(const RosenbrockSystem& sys, Complex lambda,
                                   const Scenario& scenario, const ComplexMatrix& s_inv) {
  if (scenario.empty()) throw InputError("reduce: empty scenario");
  const Index r = sys.r(), n = sys.n(), d = sys.d();
  ReducedProblem out;
  out.embedding = scenario_labels(scenario, d);
  out.lambda = lambda;
  out.r = r;
  out.n = n;

  std::vector<BlockShape> shapes;
  for (const auto& l : out.embedding) shapes.push_back(label_shape(l, r, n));
  out.structure = BlockStructure(std::move(shapes));

  const Selectors sel = build_selectors(out.embedding, r, n, d);
  out.m = sel.j2 * s_inv * (lambda_powers_row(lambda, r + n, d) * sel.j1);
  return out;
}

ComplexMatrix inverse_of(const ComplexMatrix& s) {
  return solve(s, ComplexMatrix::Identity(s.rows(), s.cols()));
}

}  // namespace

ReducedProblem reduce_to_mu(const RosenbrockSystem& sys, Complex lambda, const Scenario& scenario) {
  return reduce_with_inverse(sys, lambda, scenario, inverse_of(evaluate(sys, lambda)));
}

ExactFormula exact_formula(const ReducedProblem& problem, double inverse_norm) {
  if (problem.structure.count() != 1) throw InputError("exact_formula: problem has more than one block");
  ExactFormula out;
  out.witness = problem.m;
  out.problem = problem;
  const double s = sigma_max(problem.m);
  out.value = (s <= tol::kFloor * inverse_norm || s == 0.0) ? std::numeric_limits<double>::infinity()
                                                              : 1.0 / s;
  return out;
}

std::variant<ReducedProblem, ExactFormula> reduce(const RosenbrockSystem& sys, Complex lambda,
                                                  const Scenario& scenario) {
  const ComplexMatrix s_inv = inverse_of(evaluate(sys, lambda));
  ReducedProblem problem = reduce_with_inverse(sys, lambda, scenario, s_inv);
  if (scenario.size() == 1 && !scenario.perturb_p) return exact_formula(problem, norm2(s_inv));
  return problem;
}

// ---------------------------------------------------------------- embed

double max_block_sigma(const std::vector<ComplexMatrix>& blocks) {
  double out = 0.0;
  for (const auto& b : blocks) out = std::max(out, norm2(b));
  return out;
}

ComplexMatrix embed(const ReducedProblem& problem, const std::vector<ComplexMatrix>& delta) {
  const auto& st = problem.structure;
  if (static_cast<Index>(delta.size()) != st.count()) {
    throw InputError("embed: expected " + std::to_string(st.count()) + " blocks, got " +
                     std::to_string(delta.size()));
  }
  const Index r = problem.r, n = problem.n;
  ComplexMatrix ds = ComplexMatrix::Zero(r + n, r + n);
  for (Index i = 0; i < st.count(); ++i) {
    const auto& block = delta[static_cast<std::size_t>(i)];
    const auto& label = problem.embedding[static_cast<std::size_t>(i)];
    if (block.rows() != st[i].rows || block.cols() != st[i].cols) {
      std::ostringstream os;
      os << "embed: block " << label.to_string() << " must be " << st[i].rows << "x" << st[i].cols
         << ", got " << block.rows() << "x" << block.cols();
      throw InputError(os.str());
    }
    Complex weight(1.0, 0.0);
    if (label.kind == BlockLabel::Kind::Coeff) {
      for (Index j = 0; j < label.degree; ++j) weight *= problem.lambda;
    }
    ds.block(quadrant_row(label, r), quadrant_col(label, r), block.rows(), block.cols()) += weight * block;
  }
  return ds;
}

}  // namespace rbmu
