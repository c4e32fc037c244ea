#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rbmu/generators.hpp"
#include "rbmu/linalg.hpp"
#include "rbmu/reduction.hpp"

namespace testing {

using rbmu::Complex;
using rbmu::ComplexMatrix;
using rbmu::Index;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline rbmu::BlockStructure random_structure(std::mt19937_64& rng, int blocks, int max_dim) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::vector<rbmu::BlockShape> shapes;
  for (int i = 0; i < blocks; ++i) shapes.push_back({dim(rng), dim(rng)});
  return rbmu::BlockStructure(shapes);
}

// M is k x p for a structure whose Delta is p x k.
inline ComplexMatrix random_mu_matrix(const rbmu::BlockStructure& st, std::mt19937_64& rng) {
  return rbmu::random_matrix(st.total_cols(), st.total_rows(), rng);
}

inline std::vector<ComplexMatrix> random_blocks(const rbmu::BlockStructure& st, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> out;
  for (const auto& b : st.blocks()) out.push_back(rbmu::random_matrix(b.rows, b.cols, rng));
  return out;
}

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  return {re, g(rng)};
}

inline ComplexMatrix real_matrix(Index rows, Index cols, std::initializer_list<double> entries) {
  ComplexMatrix m(rows, cols);
  auto it = entries.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace testing
