#include "nicd/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace nicd {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Wichura's AS241 (PPND16), about 1e-16 relative before refinement.
double quantile_guess(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
             1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734) /
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
             0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
             0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772) /
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
             7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
  }
  return q < 0 ? -x : x;
}

// Adaptive Gauss-Kronrod (7, 15) on [a, b].
constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWk[7] * fc, g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * kXk[i]) + f(c + h * kXk[i]);
    k += kWk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  err = std::fabs((k - g) * h);
  return k * h;
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0) {
  double err;
  const double whole = gk15(f, a, b, err);
  if (err <= tol || depth >= 40) return whole;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * tol, depth + 1) + adaptive_gk(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_std_normal_cdf(double x) {
  if (x > -30.0) return std::log(std_normal_cdf(x));
  // Mills-ratio asymptotics once erfc underflows.
  const double z = x * x;
  return -0.5 * z - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(-1.0 / z + 3.0 / (z * z) - 15.0 / (z * z * z));
}

double std_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::DomainError, "quantile needs p in (0,1)");
  double x = quantile_guess(p);
  for (int i = 0; i < 2; ++i) {
    const double d = std_normal_pdf(x);
    if (d <= 0.0) break;
    x -= (std_normal_cdf(x) - p) / d;
  }
  return x;
}

double gaussian_isoperimetric(double t) {
  require(t > 0.0 && t < 1.0, ErrorCode::DomainError, "I(t) needs t in (0,1)");
  return std_normal_pdf(std_normal_quantile(t));
}

double isop_lower_bound(double s, double t, double rho) {
  require(s >= 0.0 && t >= 0.0, ErrorCode::DomainError, "s and t must be nonnegative");
  require(rho >= 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in [0,1)");
  return std::exp(-0.5 * (s * s + 2.0 * rho * s * t + t * t) / (1.0 - rho * rho));
}

double isop_conditional_bound(double sigma, double alpha, double rho) {
  require(sigma > 0.0 && sigma <= 1.0, ErrorCode::DomainError, "sigma must lie in (0,1]");
  require(alpha >= 0.0, ErrorCode::DomainError, "alpha must be nonnegative");
  require(rho >= 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in [0,1)");
  const double a = std::sqrt(alpha) + rho;
  return std::pow(sigma, a * a / (1.0 - rho * rho));
}

WalkBound walk_bound(double sigma, double alpha, double tau, int n) {
  require(sigma > 0.0 && sigma <= 1.0, ErrorCode::DomainError, "sigma must lie in (0,1]");
  require(alpha >= 0.0, ErrorCode::DomainError, "alpha must be nonnegative");
  require(tau > 0.0, ErrorCode::DomainError, "tau must be positive");
  require(n >= 1, ErrorCode::DomainError, "n must be positive");
  const double e = std::exp(-tau);
  const double a = std::sqrt(alpha) + e;
  WalkBound w;
  w.exponent = a * a / -std::expm1(-2.0 * tau);
  w.main = std::pow(sigma, w.exponent);
  w.error = 4.0 * std::pow(sigma, 0.5 * (alpha - 1.0)) / (tau * n);
  return w;
}

double bvn_orthant(double s, double t, double rho) {
  require(rho > -1.0 && rho < 1.0, ErrorCode::DegenerateCorrelation, "bivariate normal needs |rho| < 1");
  const double root = std::sqrt(1.0 - rho * rho);
  if (rho == 0.0) return std_normal_cdf(-s) * std_normal_cdf(-t);
  constexpr double kCut = 40.0;
  const double lo = std::max(s, -kCut);
  if (lo >= kCut) return 0.0;
  auto f = [&](double x) { return std_normal_pdf(x) * std_normal_cdf((rho * x - t) / root); };
  // Split at the bulk of phi so the adaptive pass does not miss it.
  double total = 0.0, a = lo;
  for (double cut : {-8.0, -2.0, 0.0, 2.0, 8.0, kCut}) {
    if (cut <= a) continue;
    total += adaptive_gk(f, a, cut, 1e-13);
    a = cut;
  }
  return total;
}

double hamming_ball_limit_upper(double s, double t, double rho) {
  require(s > 0.0, ErrorCode::DomainError, "s must be positive");
  require(rho * s + t > 0.0, ErrorCode::DomainError, "rho s + t must be positive");
  require(rho >= 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in [0,1)");
  const double pre = std::sqrt(1.0 - rho * rho) / (2.0 * std::numbers::pi * s * (rho * s + t));
  return pre * std::exp(-0.5 * (s * s + 2.0 * rho * s * t + t * t) / (1.0 - rho * rho));
}

double star_majority_limit(int k, double rho) {
  require(k >= 1, ErrorCode::DomainError, "k must be positive");
  require(rho > 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in (0,1)");
  const double scale = 1.0 / std::sqrt(nu_of_rho(rho));
  auto f = [&](double x) { return std::exp(k * log_std_normal_cdf(scale * x)) * std_normal_pdf(x); };
  constexpr double a = -12.0, b = 12.0;
  // Composite Simpson, doubling panels and reusing the previous nodes.
  int m = 256;
  double h = (b - a) / m;
  double ends = f(a) + f(b);
  double even = 0.0, odd = 0.0;
  for (int i = 1; i < m; ++i) (i % 2 ? odd : even) += f(a + i * h);
  double prev = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
  for (int iter = 0; iter < 20; ++iter) {
    even += odd;
    odd = 0.0;
    m *= 2;
    h *= 0.5;
    for (int i = 1; i < m; i += 2) odd += f(a + i * h);
    const double cur = (ends + 4.0 * odd + 2.0 * even) * h / 3.0;
    const bool done = std::fabs(cur - prev) <= 1e-10 * std::fabs(cur);
    prev = cur;
    if (done) break;
  }
  return 2.0 * prev;
}

double star_majority_lower_estimate(int k, double nu) {
  require(k >= 1, ErrorCode::DomainError, "k must be positive");
  require(nu > 0.0, ErrorCode::DomainError, "nu must be positive");
  const double log_value = std::log(2.0) + 0.5 * std::log(nu) + 0.5 * (nu - 1.0) * std::log(2.0 * std::numbers::pi) +
                           std::lgamma(nu) + std::lgamma(k + nu) - std::lgamma(k + 2.0 * nu);
  return std::exp(log_value);
}

double rate_slope_diagnostic(double rho, std::span<const int> k_grid) {
  require(k_grid.size() >= 2, ErrorCode::DomainError, "slope needs at least two k values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(k_grid.size());
  for (int k : k_grid) {
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(star_majority_limit(k, rho));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  require(den > 0.0, ErrorCode::DomainError, "k grid must contain distinct values");
  return (m * sxy - sx * sy) / den;
}

std::vector<int> geometric_grid(int lo, int hi, int count) {
  require(lo >= 1 && hi >= lo && count >= 1, ErrorCode::DomainError, "bad geometric grid");
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(static_cast<int>(std::lround(lo * std::pow(static_cast<double>(hi) / lo, f))));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace nicd
