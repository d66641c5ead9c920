#pragma once

// Seeded property checks for the inequalities the library relies on. Each
// check reports the worst slack (RHS - LHS oriented so that >= 0 means the
// inequality held) and a witness that reproduces the worst trial.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nicd/cube.hpp"
#include "nicd/tree_nicd.hpp"

namespace nicd {

struct CheckReport {
  std::string name;
  std::uint64_t trials = 0;
  double worst_slack = 0.0;
  std::string witness;
  bool passed = true;
  double tolerance = 1e-10;
  /// Reported-only quantities (crossover points, naive bounds, ...).
  std::vector<std::pair<std::string, double>> details;
};

/// Deterministic generator: identical seeds give identical streams on every
/// platform (no std distributions, whose output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for trial `index` of a run seeded with `seed`.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index);

  std::uint64_t bits() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int m) { return static_cast<int>(uniform() * m); }
  double normal();

 private:
  std::mt19937_64 engine_;
};

struct CheckOptions {
  std::optional<int> n;
  std::optional<double> rho;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<int> r;
  std::optional<int> k_max;
  std::optional<int> ell_max;
  std::vector<int> k_grid;
  int jobs = 1;
};

CheckReport check_forward_bb(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_reverse_bb(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_two_function(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_two_point_coefficients(double p, double q, int terms);
/// Random (p, q) pairs, `terms` coefficients each.
CheckReport check_two_point_coefficients_random(std::uint64_t trials, std::uint64_t seed, int terms = 50);
CheckReport check_reverse_holder(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
/// Random sets against the Gaussian lower bound, plus opposed Hamming balls
/// at n = 14 against the asymptotic upper estimate (factor 4).
CheckReport check_isoperimetric_sets(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_walk_bound(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_fkg_measure(const NicdInstance& tree, std::uint64_t seed, int samples = 64);
CheckReport check_fkg_random_trees(int max_vertices, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_conditional_hit_monotonicity(int n, double rho, int ell_max);
/// Conditional hit terms for A = majority on n bits, ell = 0..ell_max.
std::vector<double> conditional_hit_terms(int n, double rho, int ell_max);
CheckReport check_maj_crossover(double rho, int n, int r, int k_max);
CheckReport check_tpower_diagnostic(double rho, int n, const std::vector<int>& k_grid,
                                    const std::vector<std::pair<std::string, CubeFunction>>& candidates);
/// Half-cube, majority and two-coordinate subcube indicators on n bits.
std::vector<std::pair<std::string, CubeFunction>> tpower_candidates(int n);
CheckReport check_aks_bound(int r_max, int k_max, std::uint64_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_monotone_shift(int max_vertices, int n, std::uint64_t trials, std::uint64_t seed, int jobs = 1);

const std::vector<std::string>& check_names();

/// Dispatches by name with per-check defaults; throws MalformedInput for an
/// unknown name.
CheckReport run_check(const std::string& name, std::uint64_t seed, std::uint64_t trials,
                      const CheckOptions& options = {});

}  // namespace nicd
