#pragma once

#include <stdexcept>
#include <string>

namespace rbmu {

// Malformed input: bad shapes, unparsable files, non-finite entries.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not deliver its contract.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(const std::string& what, double sigma_min)
      : NumericError(what), sigma_min_(sigma_min) {}

  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

}  // namespace rbmu
