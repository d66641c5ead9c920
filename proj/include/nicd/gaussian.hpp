#pragma once

// Gaussian special functions and the limiting quantities that govern
// non-interactive correlation distillation for large n.

#include <span>
#include <vector>

#include "nicd/error.hpp"

namespace nicd {

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// log Phi(x), accurate far into the lower tail.
double log_std_normal_cdf(double x);
/// Throws DomainError outside (0,1).
double std_normal_quantile(double p);
/// I(t) = phi(Phi^{-1}(t)).
double gaussian_isoperimetric(double t);

/// exp(-(s^2 + 2 rho s t + t^2) / (2 (1 - rho^2))); RhoOutOfRange at rho = 1.
double isop_lower_bound(double s, double t, double rho);

/// sigma^{(sqrt(alpha) + rho)^2 / (1 - rho^2)}.
double isop_conditional_bound(double sigma, double alpha, double rho);

struct WalkBound {
  double exponent;  // (sqrt(alpha) + e^{-tau})^2 / (1 - e^{-2 tau})
  double main;      // sigma^exponent
  double error;     // 4 sigma^{(alpha - 1)/2} / (tau n); our constant, see README
};

WalkBound walk_bound(double sigma, double alpha, double tau, int n);

/// Pr[X >= s, Y >= t] for standard normals with correlation rho.
double bvn_orthant(double s, double t, double rho);

/// Asymptotic upper estimate for opposed Hamming balls of radii given by s, t.
double hamming_ball_limit_upper(double s, double t, double rho);

/// lim_n P(star with k leaf players, rho, n, majority), i.e.
/// 2 * int Phi(x / sqrt(nu))^k phi(x) dx with nu = 1/rho^2 - 1.
double star_majority_limit(int k, double rho);

/// 2 nu^{1/2} (2 pi)^{(nu-1)/2} Gamma(nu) Gamma(k+nu) / Gamma(k+2nu).
/// Below star_majority_limit when nu >= 1; for nu < 1 it lies above it.
double star_majority_lower_estimate(int k, double nu);

inline double nu_of_rho(double rho) { return 1.0 / (rho * rho) - 1.0; }

/// Least-squares slope of log star_majority_limit(k, rho) against log k.
double rate_slope_diagnostic(double rho, std::span<const int> k_grid);

/// `count` integers spaced geometrically on [lo, hi], deduplicated.
std::vector<int> geometric_grid(int lo, int hi, int count);

}  // namespace nicd
