#pragma once

// Finite reversible Markov chains and bounds on the probability that a
// time-inhomogeneous chain stays inside prescribed sets.

#include <memory>
#include <optional>
#include <vector>

#include "nicd/error.hpp"

namespace nicd {

/// Eigen-data of a reversible chain in L^2(pi).
struct SpectralData {
  std::vector<double> eigenvalues;          // ascending, last one is 1
  std::vector<std::vector<double>> basis;   // right eigenvectors, pi-orthonormal
  std::vector<double> symmetrized;          // D^{1/2} M D^{-1/2}, row-major
};

class ReversibleChain {
 public:
  /// Validates stochasticity and detailed balance. Without `stationary` the
  /// measure is derived along a spanning tree of the positive transitions.
  explicit ReversibleChain(std::vector<std::vector<double>> rows,
                           std::optional<std::vector<double>> stationary = std::nullopt);

  /// T_rho on {-1,1}^n as a 2^n-state chain.
  static ReversibleChain noise_chain(int n, double rho);
  /// Holds with probability `hold`, otherwise jumps to a uniform other state.
  static ReversibleChain complete_graph_walk(int r, double hold);

  int size() const { return r_; }
  double transition(int x, int y) const { return m_[static_cast<std::size_t>(x) * r_ + y]; }
  const std::vector<double>& matrix() const { return m_; }
  const std::vector<double>& stationary() const { return pi_; }

  bool is_irreducible() const;
  bool is_ergodic() const;

  /// Cached after the first call; safe to call concurrently.
  const SpectralData& spectrum() const;

 private:
  struct Cache;
  int r_;
  std::vector<double> m_;
  std::vector<double> pi_;
  std::shared_ptr<Cache> cache_;
};

using StateSet = std::vector<int>;

SpectralData spectral_decomposition(const ReversibleChain& chain);

/// min{|-1 - lambda_1|, |1 - lambda_{r-1}|}; throws NotErgodic.
double spectral_gap(const ReversibleChain& chain);

double set_measure(const ReversibleChain& chain, const StateSet& set);

/// Chains M_1..M_k sharing one stationary measure and sets A_0..A_k.
class StayQuery {
 public:
  StayQuery(std::vector<ReversibleChain> chains, std::vector<StateSet> sets);

  const std::vector<ReversibleChain>& chains() const { return chains_; }
  const std::vector<StateSet>& sets() const { return sets_; }
  int length() const { return static_cast<int>(chains_.size()); }

 private:
  std::vector<ReversibleChain> chains_;
  std::vector<StateSet> sets_;
};

/// Pr[X_i in A_i for all i] for the chain started from pi.
double stay_probability_exact(const StayQuery& q);

/// sqrt(pi(A_0) pi(A_k)) prod_i [1 - delta_i (1 - sqrt(pi(A_{i-1}) pi(A_i)))].
double aks_bound(const StayQuery& q);

/// ||P_2 M P_1|| on L^2(pi), P_i the restriction to A_i.
double projection_operator_norm(const ReversibleChain& chain, const StateSet& from, const StateSet& to);

struct EqualityDiagnostics {
  bool equality = false;
  double residual = 0.0;        // ||M h - (1 - delta) h||_pi, h = I_A - pi(A)
  double gap = 0.0;
  double smallest_eigenvalue = 0.0;
  double measure = 0.0;
  double max_bound_gap = 0.0;   // max_k |aks - exact| over constant-set queries, k = 1..8
};

/// Tests whether I_A - pi(A) is an eigenfunction at 1 - delta. Requires
/// delta < 1 and lambda_1 > -1 + delta (InapplicableHypotheses otherwise).
EqualityDiagnostics equality_case_check(const ReversibleChain& chain, const StateSet& set);

/// max over `sets` of (exact / bound)^{1/k} for the constant-set query of
/// length k on one chain: an empirical stand-in for the strict-inequality
/// contraction constant.
double empirical_contraction(const ReversibleChain& chain, const std::vector<StateSet>& sets, int k);

}  // namespace nicd
