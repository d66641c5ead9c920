#pragma once

// Real-valued functions on the discrete cube {-1,1}^n.
//
// Point i of the cube has coordinate j (0-based) equal to +1 when bit j of i
// is clear and -1 when it is set. Every table, transform and file encoding in
// the library uses this convention.

#include <cstdint>
#include <span>
#include <vector>

#include "nicd/error.hpp"

namespace nicd {

using CubeIndex = std::uint32_t;

inline constexpr int kMaxCubeDim = 24;

constexpr int coordinate(CubeIndex point, int j) { return ((point >> j) & 1u) ? -1 : 1; }

constexpr int level(CubeIndex mask) { return __builtin_popcount(mask); }

/// Correlation rho in [0,1] of each bit pair across a channel edge.
class CorrelationParam {
 public:
  explicit CorrelationParam(double rho);

  double rho() const { return rho_; }
  /// Flip probability 1/2 - rho/2.
  double epsilon() const { return 0.5 - 0.5 * rho_; }
  /// Agreement probability 1/2 + rho/2.
  double agreement() const { return 0.5 + 0.5 * rho_; }

 private:
  double rho_;
};

class CubeFunction {
 public:
  CubeFunction(int n, std::vector<double> values);

  static CubeFunction constant(int n, double c);

  template <class F>
  static CubeFunction tabulate(int n, F&& fn) {
    check_dimension(n);
    std::vector<double> v(std::size_t{1} << n);
    for (CubeIndex i = 0; i < v.size(); ++i) v[i] = fn(i);
    return CubeFunction(n, std::move(v));
  }

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](CubeIndex i) const { return values_[i]; }
  double& operator[](CubeIndex i) { return values_[i]; }

  double mean() const;
  bool is_boolean() const;
  bool is_zero_one() const;
  bool is_nonnegative() const;

  static void check_dimension(int n);

 private:
  int n_;
  std::vector<double> values_;
};

CubeFunction pointwise_product(const CubeFunction& a, const CubeFunction& b);

/// Fourier coefficients: entry U is 2^{-n} sum_x f(x) prod_{j in U} x_j.
CubeFunction walsh_hadamard(const CubeFunction& f);

/// Rebuilds the function from its Fourier coefficients.
CubeFunction inverse_walsh_hadamard(const CubeFunction& coefficients);

/// (T_rho f)(x) = E[f(y)] for y a rho-correlated copy of x.
CubeFunction noise_operator(const CubeFunction& f, CorrelationParam rho);

/// In-place T_rho on a raw table of 2^n entries; applies the two-point
/// averaging one coordinate at a time, so nonnegative input stays nonnegative.
void apply_noise(std::span<double> values, int n, double rho);

/// (E|f|^p)^{1/p}. For p < 1 the function must be nonnegative; p = 0 is the
/// geometric mean and any zero entry makes the p <= 0 norm vanish.
double p_norm(const CubeFunction& f, double p);

/// E[f(x) g(y)] for x uniform and y a rho-correlated copy of x.
double correlated_expectation(const CubeFunction& f, const CubeFunction& g, CorrelationParam rho);

/// Probability that the lazy walk (hold w.p. 1/2, else flip a uniform
/// coordinate) started uniformly in `start` is in `target` after `steps` steps.
double lazy_walk_probability(const CubeFunction& start, const CubeFunction& target,
                             std::uint64_t steps);

}  // namespace nicd
