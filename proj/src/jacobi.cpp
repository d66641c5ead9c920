#include "nicd/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nicd {

namespace {

double off_diagonal_norm(const std::vector<double>& a, int r) {
  double s = 0.0;
  for (int p = 0; p < r; ++p) {
    for (int q = p + 1; q < r; ++q) s += a[p * r + q] * a[p * r + q];
  }
  return std::sqrt(2.0 * s);
}

}  // namespace

SymmetricEigen jacobi_eigen(std::vector<double> a, int r, double tolerance) {
  constexpr int kMaxSweeps = 100;
  std::vector<double> v(static_cast<std::size_t>(r) * r, 0.0);
  for (int i = 0; i < r; ++i) v[i * r + i] = 1.0;

  SymmetricEigen out;
  double off = off_diagonal_norm(a, r);
  while (off > tolerance && out.sweeps < kMaxSweeps) {
    ++out.sweeps;
    for (int p = 0; p < r - 1; ++p) {
      for (int q = p + 1; q < r; ++q) {
        const double apq = a[p * r + q];
        if (apq == 0.0) continue;
        const double app = a[p * r + p];
        const double aqq = a[q * r + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < r; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * r + p];
          const double akq = a[k * r + q];
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a[k * r + p] = a[p * r + k] = np;
          a[k * r + q] = a[q * r + k] = nq;
        }
        a[p * r + p] = app - t * apq;
        a[q * r + q] = aqq + t * apq;
        a[p * r + q] = a[q * r + p] = 0.0;
        for (int k = 0; k < r; ++k) {
          const double vkp = v[k * r + p];
          const double vkq = v[k * r + q];
          v[k * r + p] = c * vkp - s * vkq;
          v[k * r + q] = s * vkp + c * vkq;
        }
      }
    }
    off = off_diagonal_norm(a, r);
  }
  out.off_norm = off;

  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i * r + i] < a[j * r + j]; });
  out.values.resize(r);
  out.vectors.resize(static_cast<std::size_t>(r) * r);
  for (int c = 0; c < r; ++c) {
    out.values[c] = a[order[c] * r + order[c]];
    for (int k = 0; k < r; ++k) out.vectors[k * r + c] = v[k * r + order[c]];
  }
  return out;
}

}  // namespace nicd
