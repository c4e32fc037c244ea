#include "rbmu/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rbmu/error.hpp"

namespace rbmu {

namespace {

double read_real(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw InputError(path + ": expected a number");
}

Complex read_entry(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(path + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Index read_dim(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(std::string(key) + ": expected an integer");
  return v.get<Index>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

void expect_shape(const ComplexMatrix& m, Index rows, Index cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols)
    throw InputError(path + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        write(v, out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case Json::value_t::array: {
      // arrays of scalars stay on one line, which keeps matrices readable
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      bool pairs = true;  // rows of [re, im] entries
      for (const auto& v : j) pairs = pairs && v.is_array() && v.size() == 2 && !v[0].is_structured();
      if (j.empty()) { out += "[]"; return; }
      if (flat || pairs) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) throw InputError(rp + ": expected a nonempty row");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols)
      throw InputError(rp + ": row has " + std::to_string(j[i].size()) + " entries, expected " + std::to_string(cols));
  }
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          read_entry(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  require_finite(m, path);
  return m;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json complex_to_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RosenbrockSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("system: expected a JSON object");
  const Index r = read_dim(j, "r"), n = read_dim(j, "n"), d = read_dim(j, "d");
  if (r < 1 || n < 1 || d < 0) throw InputError("system: need r >= 1, n >= 1, d >= 0");
  ComplexMatrix a = matrix_from_json(field(j, "A"), "A");
  ComplexMatrix b = matrix_from_json(field(j, "B"), "B");
  ComplexMatrix c = matrix_from_json(field(j, "C"), "C");
  expect_shape(a, r, r, "A");
  expect_shape(b, r, n, "B");
  expect_shape(c, n, r, "C");
  const Json& pj = field(j, "P");
  if (!pj.is_array() || static_cast<Index>(pj.size()) != d + 1)
    throw InputError("P: expected an array of d + 1 = " + std::to_string(d + 1) + " matrices");
  std::vector<ComplexMatrix> p;
  for (Index k = 0; k <= d; ++k) {
    const std::string path = "P[" + std::to_string(k) + "]";
    p.push_back(matrix_from_json(pj[static_cast<std::size_t>(k)], path));
    expect_shape(p.back(), n, n, path);
  }
  return RosenbrockSystem(std::move(a), std::move(b), std::move(c), std::move(p));
}

Json system_to_json(const RosenbrockSystem& sys) {
  Json j;
  j["r"] = sys.r();
  j["n"] = sys.n();
  j["d"] = sys.d();
  j["A"] = matrix_to_json(sys.a());
  j["B"] = matrix_to_json(sys.b());
  j["C"] = matrix_to_json(sys.c());
  Json p = Json::array();
  for (const auto& m : sys.poly_coeffs()) p.push_back(matrix_to_json(m));
  j["P"] = std::move(p);
  return j;
}

ComplexMatrix mu_matrix_from_json(const Json& j) {
  if (j.is_object()) return matrix_from_json(field(j, "M"), "M");
  return matrix_from_json(j, "M");
}

std::string dump(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Json certificate_to_json(const CertificateFile& cert) {
  Json j;
  j["lambda"] = complex_to_json(cert.lambda);
  j["scenario"] = cert.scenario.to_string();
  Json blocks = Json::array();
  for (const auto& b : cert.delta_blocks) {
    Json e;
    e["label"] = b.label.to_string();
    e["matrix"] = matrix_to_json(b.matrix);
    blocks.push_back(std::move(e));
  }
  j["delta_blocks"] = std::move(blocks);
  j["claimed_eta"] = number(cert.claimed_eta);
  j["residual"] = number(cert.residual);
  return j;
}

CertificateFile certificate_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("certificate: expected a JSON object");
  CertificateFile cert;
  const Json& lj = field(j, "lambda");
  cert.lambda = read_entry(lj, "lambda");
  const Json& sj = field(j, "scenario");
  if (!sj.is_string()) throw InputError("scenario: expected a string");
  cert.scenario = Scenario::parse(sj.get<std::string>());
  const Json& bj = field(j, "delta_blocks");
  if (!bj.is_array()) throw InputError("delta_blocks: expected an array");
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string path = "delta_blocks[" + std::to_string(i) + "]";
    if (!bj[i].is_object()) throw InputError(path + ": expected an object");
    const Json& label = field(bj[i], "label");
    if (!label.is_string()) throw InputError(path + ".label: expected a string");
    cert.delta_blocks.push_back(
        {BlockLabel::parse(label.get<std::string>()), matrix_from_json(field(bj[i], "matrix"), path + ".matrix")});
  }
  cert.claimed_eta = read_real(field(j, "claimed_eta"), "claimed_eta");
  cert.residual = read_real(field(j, "residual"), "residual");
  return cert;
}

Complex parse_lambda(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("lambda '" + text + "': expected re[,im]");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size()) throw InputError("lambda '" + text + "': expected re[,im]");
    parts.push_back(v);
  }
  if (parts.empty() || parts.size() > 2) throw InputError("lambda '" + text + "': expected re[,im]");
  const Complex z(parts[0], parts.size() == 2 ? parts[1] : 0.0);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("lambda must be finite");
  return z;
}

}  // namespace rbmu
