#pragma once

#include <vector>

namespace nicd {

struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column i (row-major r x r) pairs with values[i]
  int sweeps = 0;
  double off_norm = 0.0;        // off-diagonal Frobenius norm at exit
};

/// Cyclic Jacobi rotations on a symmetric r x r row-major matrix until the
/// off-diagonal Frobenius norm drops to `tolerance`.
SymmetricEigen jacobi_eigen(std::vector<double> a, int r, double tolerance = 1e-13);

}  // namespace nicd
