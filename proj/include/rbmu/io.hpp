#pragma once

// JSON formats for matrices, systems and certificate files.
// A matrix is an array of rows; an entry is [re, im] (a bare number is read
// as a real entry). A system is {"r", "n", "d", "A", "B", "C", "P"} with P
// holding d + 1 matrices.

#include <string>
#include <vector>

#include <json.hpp>

#include "rbmu/backward_error.hpp"
#include "rbmu/linalg.hpp"
#include "rbmu/rosenbrock.hpp"

namespace rbmu {

using Json = nlohmann::ordered_json;

ComplexMatrix matrix_from_json(const Json& j, const std::string& path);
Json matrix_to_json(const ComplexMatrix& m);

RosenbrockSystem system_from_json(const Json& j);
Json system_to_json(const RosenbrockSystem& sys);

/// Bare array of rows, or an object with the matrix under "M".
ComplexMatrix mu_matrix_from_json(const Json& j);

/// Non-finite values become the strings "inf", "-inf", "nan".
Json number(double x);
Json complex_to_json(Complex z);

/// Serializes with every double printed as %.17g, two-space indent.
std::string dump(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct CertificateFile {
  Complex lambda;
  Scenario scenario;
  std::vector<LabeledBlock> delta_blocks;
  double claimed_eta = 0.0;
  double residual = 0.0;
};

Json certificate_to_json(const CertificateFile& cert);
CertificateFile certificate_from_json(const Json& j);

/// "re" or "re,im".
Complex parse_lambda(const std::string& text);

}  // namespace rbmu
