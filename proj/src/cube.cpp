#include "nicd/cube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nicd {

CorrelationParam::CorrelationParam(double rho) : rho_(rho) {
  require(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0, ErrorCode::DomainError,
          "rho must lie in [0,1], got " + std::to_string(rho));
}

void CubeFunction::check_dimension(int n) {
  require(n >= 1 && n <= kMaxCubeDim, ErrorCode::MalformedInput,
          "cube dimension must be in 1.." + std::to_string(kMaxCubeDim) + ", got " +
              std::to_string(n));
}

CubeFunction::CubeFunction(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_dimension(n);
  require(values_.size() == (std::size_t{1} << n), ErrorCode::MalformedInput,
          "table length " + std::to_string(values_.size()) + " is not 2^" + std::to_string(n));
}

CubeFunction CubeFunction::constant(int n, double c) {
  check_dimension(n);
  return CubeFunction(n, std::vector<double>(std::size_t{1} << n, c));
}

double CubeFunction::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

bool CubeFunction::is_boolean() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0 || v == -1.0; });
}

bool CubeFunction::is_zero_one() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

bool CubeFunction::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

CubeFunction pointwise_product(const CubeFunction& a, const CubeFunction& b) {
  require(a.n() == b.n(), ErrorCode::DimensionMismatch, "pointwise product of different cubes");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] * b.values()[i];
  return CubeFunction(a.n(), std::move(v));
}

namespace {

void butterfly(std::span<double> v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

CubeFunction walsh_hadamard(const CubeFunction& f) {
  std::vector<double> v(f.values().begin(), f.values().end());
  butterfly(v);
  const double scale = std::ldexp(1.0, -f.n());
  for (double& x : v) x *= scale;
  return CubeFunction(f.n(), std::move(v));
}

CubeFunction inverse_walsh_hadamard(const CubeFunction& coefficients) {
  std::vector<double> v(coefficients.values().begin(), coefficients.values().end());
  butterfly(v);
  return CubeFunction(coefficients.n(), std::move(v));
}

void apply_noise(std::span<double> values, int n, double rho) {
  if (rho == 1.0) return;
  const double stay = 0.5 + 0.5 * rho;
  const double flip = 0.5 - 0.5 * rho;
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i & bit) continue;
      const double a = values[i];
      const double b = values[i | bit];
      values[i] = stay * a + flip * b;
      values[i | bit] = stay * b + flip * a;
    }
  }
}

CubeFunction noise_operator(const CubeFunction& f, CorrelationParam rho) {
  CubeFunction out = f;
  apply_noise(out.values(), f.n(), rho.rho());
  return out;
}

double p_norm(const CubeFunction& f, double p) {
  require(std::isfinite(p), ErrorCode::DomainError, "norm exponent must be finite");
  const auto v = f.values();
  if (p < 1.0) {
    require(f.is_nonnegative(), ErrorCode::NegativeEntryForLowNorm,
            "p = " + std::to_string(p) + " requires a nonnegative function");
  }
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  bool has_zero = false;
  for (double x : v) {
    const double a = std::fabs(x);
    largest = std::max(largest, a);
    smallest = std::min(smallest, a);
    has_zero = has_zero || a == 0.0;
  }
  if (largest == 0.0) return 0.0;
  if (p <= 0.0 && has_zero) return 0.0;

  const double count = static_cast<double>(v.size());
  if (p == 0.0) {
    double s = 0.0;
    for (double x : v) s += std::log(x);
    return std::exp(s / count);
  }
  // Normalise so every p * log(|x| / scale) is <= 0, then evaluate
  // (E[(|x|/scale)^p])^{1/p} through expm1/log1p to stay accurate as p -> 0.
  const double scale = p > 0.0 ? largest : smallest;
  double s = 0.0;
  for (double x : v) {
    const double a = std::fabs(x);
    s += a == 0.0 ? -1.0 : std::expm1(p * std::log(a / scale));
  }
  s /= count;
  return scale * std::exp(std::log1p(s) / p);
}

double correlated_expectation(const CubeFunction& f, const CubeFunction& g, CorrelationParam rho) {
  require(f.n() == g.n(), ErrorCode::DimensionMismatch,
          "functions on " + std::to_string(f.n()) + " and " + std::to_string(g.n()) + " coordinates");
  std::vector<double> tg(g.values().begin(), g.values().end());
  apply_noise(tg, g.n(), rho.rho());
  double s = 0.0;
  for (std::size_t i = 0; i < tg.size(); ++i) s += f.values()[i] * tg[i];
  return s / static_cast<double>(tg.size());
}

double lazy_walk_probability(const CubeFunction& start, const CubeFunction& target,
                             std::uint64_t steps) {
  require(start.n() == target.n(), ErrorCode::DimensionMismatch, "start and target on different cubes");
  require(start.is_zero_one() && target.is_zero_one(), ErrorCode::MalformedInput,
          "walk endpoints must be zero-one indicators");
  const double sigma = start.mean();
  require(sigma > 0.0, ErrorCode::EmptyStartSet, "start set is empty");

  const CubeFunction s_hat = walsh_hadamard(start);
  const CubeFunction t_hat = walsh_hadamard(target);
  const int n = start.n();
  std::vector<double> decay(n + 1);
  for (int l = 0; l <= n; ++l) {
    decay[l] = std::pow(1.0 - static_cast<double>(l) / n, static_cast<double>(steps));
  }
  double s = 0.0;
  for (CubeIndex u = 0; u < s_hat.size(); ++u) s += s_hat[u] * t_hat[u] * decay[level(u)];
  return s / sigma;
}

}  // namespace nicd
