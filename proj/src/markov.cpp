#include "nicd/markov.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "nicd/jacobi.hpp"

namespace nicd {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kBalanceTolerance = 1e-12;
constexpr int kMaxStates = 4096;

std::vector<double> indicator(int r, const StateSet& set) {
  std::vector<double> v(r, 0.0);
  for (int s : set) {
    require(s >= 0 && s < r, ErrorCode::MalformedInput, "state " + std::to_string(s) + " out of range");
    v[s] = 1.0;
  }
  return v;
}

}  // namespace

struct ReversibleChain::Cache {
  std::once_flag once;
  SpectralData data;
};

ReversibleChain::ReversibleChain(std::vector<std::vector<double>> rows,
                                 std::optional<std::vector<double>> stationary)
    : r_(static_cast<int>(rows.size())), cache_(std::make_shared<Cache>()) {
  require(r_ >= 1 && r_ <= kMaxStates, ErrorCode::MalformedInput,
          "chain size must be in 1.." + std::to_string(kMaxStates));
  m_.reserve(static_cast<std::size_t>(r_) * r_);
  for (int x = 0; x < r_; ++x) {
    require(static_cast<int>(rows[x].size()) == r_, ErrorCode::MalformedInput,
            "row " + std::to_string(x) + " has the wrong length");
    double sum = 0.0;
    for (double p : rows[x]) {
      require(std::isfinite(p) && p >= 0.0, ErrorCode::MalformedInput, "negative transition probability");
      sum += p;
      m_.push_back(p);
    }
    require(std::fabs(sum - 1.0) <= kRowTolerance, ErrorCode::MalformedInput,
            "row " + std::to_string(x) + " sums to " + std::to_string(sum));
  }

  if (stationary) {
    pi_ = std::move(*stationary);
    require(static_cast<int>(pi_.size()) == r_, ErrorCode::MalformedInput, "pi has the wrong length");
    double sum = 0.0;
    for (double p : pi_) {
      require(std::isfinite(p) && p > 0.0, ErrorCode::MalformedInput, "pi must be strictly positive");
      sum += p;
    }
    require(std::fabs(sum - 1.0) <= kRowTolerance, ErrorCode::MalformedInput, "pi does not sum to 1");
  } else {
    // Detailed balance fixes pi(y) / pi(x) along every positive transition.
    std::vector<double> w(r_, 0.0);
    w[0] = 1.0;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < r_; ++y) {
        if (w[y] > 0.0 || transition(x, y) == 0.0) continue;
        require(transition(y, x) > 0.0, ErrorCode::NotReversible,
                "m(" + std::to_string(x) + "," + std::to_string(y) + ") > 0 but the reverse is 0");
        w[y] = w[x] * transition(x, y) / transition(y, x);
        stack.push_back(y);
      }
    }
    require(std::all_of(w.begin(), w.end(), [](double v) { return v > 0.0; }), ErrorCode::NotErgodic,
            "chain is reducible; supply pi explicitly");
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    pi_ = std::move(w);
  }

  for (int x = 0; x < r_; ++x) {
    for (int y = x + 1; y < r_; ++y) {
      const double lhs = pi_[x] * transition(x, y);
      const double rhs = pi_[y] * transition(y, x);
      require(std::fabs(lhs - rhs) <= kBalanceTolerance, ErrorCode::NotReversible,
              "detailed balance fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  }
}

ReversibleChain ReversibleChain::noise_chain(int n, double rho) {
  require(n >= 1 && n <= 12, ErrorCode::MalformedInput, "noise chain needs 1 <= n <= 12");
  require(rho >= 0.0 && rho <= 1.0, ErrorCode::DomainError, "rho must lie in [0,1]");
  const int r = 1 << n;
  const double stay = 0.5 + 0.5 * rho;
  const double flip = 0.5 - 0.5 * rho;
  std::vector<std::vector<double>> rows(r, std::vector<double>(r));
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      const int d = __builtin_popcount(static_cast<unsigned>(x ^ y));
      rows[x][y] = std::pow(stay, n - d) * std::pow(flip, d);
    }
  }
  return ReversibleChain(std::move(rows), std::vector<double>(r, 1.0 / r));
}

ReversibleChain ReversibleChain::complete_graph_walk(int r, double hold) {
  require(r >= 2, ErrorCode::MalformedInput, "complete graph walk needs r >= 2");
  require(hold >= 0.0 && hold <= 1.0, ErrorCode::DomainError, "hold probability must lie in [0,1]");
  const double jump = (1.0 - hold) / (r - 1);
  std::vector<std::vector<double>> rows(r, std::vector<double>(r, jump));
  for (int x = 0; x < r; ++x) rows[x][x] = hold;
  return ReversibleChain(std::move(rows), std::vector<double>(r, 1.0 / r));
}

bool ReversibleChain::is_irreducible() const {
  std::vector<char> seen(r_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < r_; ++y) {
      if (!seen[y] && transition(x, y) > 0.0) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  // Reversibility makes the positive-transition graph symmetric, so
  // reachability from state 0 is strong connectivity.
  return count == r_;
}

bool ReversibleChain::is_ergodic() const {
  if (!is_irreducible()) return false;
  const auto& ev = spectrum().eigenvalues;
  if (r_ == 1) return true;
  const double sub = std::max(std::fabs(ev.front()), std::fabs(ev[r_ - 2]));
  return sub < 1.0 - 1e-12;
}

const SpectralData& ReversibleChain::spectrum() const {
  std::call_once(cache_->once, [this] {
    const int r = r_;
    std::vector<double> root(r);
    for (int x = 0; x < r; ++x) root[x] = std::sqrt(pi_[x]);
    std::vector<double> s(static_cast<std::size_t>(r) * r);
    for (int x = 0; x < r; ++x) {
      for (int y = 0; y < r; ++y) s[x * r + y] = root[x] * transition(x, y) / root[y];
    }
    for (int x = 0; x < r; ++x) {
      for (int y = x + 1; y < r; ++y) {
        const double avg = 0.5 * (s[x * r + y] + s[y * r + x]);
        s[x * r + y] = s[y * r + x] = avg;
      }
    }
    auto eig = jacobi_eigen(s, r);
    SpectralData& d = cache_->data;
    d.eigenvalues = eig.values;
    d.basis.assign(r, std::vector<double>(r));
    for (int i = 0; i < r; ++i) {
      for (int x = 0; x < r; ++x) d.basis[i][x] = eig.vectors[x * r + i] / root[x];
    }
    d.symmetrized = std::move(s);
  });
  return cache_->data;
}

SpectralData spectral_decomposition(const ReversibleChain& chain) { return chain.spectrum(); }

double spectral_gap(const ReversibleChain& chain) {
  require(chain.is_ergodic(), ErrorCode::NotErgodic, "spectral gap needs an ergodic chain");
  const auto& ev = chain.spectrum().eigenvalues;
  const int r = chain.size();
  if (r == 1) return 1.0;
  return std::min(std::fabs(-1.0 - ev.front()), std::fabs(1.0 - ev[r - 2]));
}

double set_measure(const ReversibleChain& chain, const StateSet& set) {
  const auto ind = indicator(chain.size(), set);
  double s = 0.0;
  for (int x = 0; x < chain.size(); ++x) s += ind[x] * chain.stationary()[x];
  return s;
}

StayQuery::StayQuery(std::vector<ReversibleChain> chains, std::vector<StateSet> sets)
    : chains_(std::move(chains)), sets_(std::move(sets)) {
  require(!chains_.empty(), ErrorCode::MalformedInput, "stay query needs k >= 1 chains");
  require(sets_.size() == chains_.size() + 1, ErrorCode::MalformedInput,
          "stay query needs k + 1 sets for k chains");
  const auto& pi = chains_.front().stationary();
  for (const auto& c : chains_) {
    require(c.size() == chains_.front().size(), ErrorCode::DimensionMismatch, "chains differ in size");
    for (int x = 0; x < c.size(); ++x) {
      require(std::fabs(c.stationary()[x] - pi[x]) <= 1e-12, ErrorCode::MalformedInput,
              "chains do not share a stationary measure");
    }
  }
  for (const auto& s : sets_) indicator(chains_.front().size(), s);
}

double stay_probability_exact(const StayQuery& q) {
  const int r = q.chains().front().size();
  const auto& pi = q.chains().front().stationary();
  auto mask = indicator(r, q.sets()[0]);
  std::vector<double> v(r), next(r);
  for (int x = 0; x < r; ++x) v[x] = pi[x] * mask[x];
  for (int i = 0; i < q.length(); ++i) {
    const auto& m = q.chains()[i];
    mask = indicator(r, q.sets()[i + 1]);
    std::fill(next.begin(), next.end(), 0.0);
    for (int x = 0; x < r; ++x) {
      if (v[x] == 0.0) continue;
      for (int y = 0; y < r; ++y) next[y] += v[x] * m.transition(x, y);
    }
    for (int y = 0; y < r; ++y) v[y] = next[y] * mask[y];
  }
  double s = 0.0;
  for (double p : v) s += p;
  return s;
}

double aks_bound(const StayQuery& q) {
  const auto& c0 = q.chains().front();
  std::vector<double> root(q.sets().size());
  for (std::size_t i = 0; i < q.sets().size(); ++i) root[i] = std::sqrt(set_measure(c0, q.sets()[i]));
  double bound = root.front() * root.back();
  for (int i = 1; i <= q.length(); ++i) {
    const double delta = spectral_gap(q.chains()[i - 1]);
    bound *= 1.0 - delta * (1.0 - root[i - 1] * root[i]);
  }
  return bound;
}

double projection_operator_norm(const ReversibleChain& chain, const StateSet& from, const StateSet& to) {
  const int r = chain.size();
  const auto in_from = indicator(r, from);
  const auto in_to = indicator(r, to);
  std::vector<int> cols, rows;
  for (int x = 0; x < r; ++x) {
    if (in_from[x] > 0.0) cols.push_back(x);
    if (in_to[x] > 0.0) rows.push_back(x);
  }
  if (cols.empty() || rows.empty()) return 0.0;
  const auto& s = chain.spectrum().symmetrized;
  const int c = static_cast<int>(cols.size());
  std::vector<double> gram(static_cast<std::size_t>(c) * c, 0.0);
  for (int a = 0; a < c; ++a) {
    for (int b = a; b < c; ++b) {
      double g = 0.0;
      for (int x : rows) g += s[x * r + cols[a]] * s[x * r + cols[b]];
      gram[a * c + b] = gram[b * c + a] = g;
    }
  }
  const auto eig = jacobi_eigen(std::move(gram), c);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

EqualityDiagnostics equality_case_check(const ReversibleChain& chain, const StateSet& set) {
  EqualityDiagnostics d;
  d.gap = spectral_gap(chain);
  d.smallest_eigenvalue = chain.spectrum().eigenvalues.front();
  require(d.gap < 1.0 && d.smallest_eigenvalue > -1.0 + d.gap, ErrorCode::InapplicableHypotheses,
          "equality characterisation needs delta < 1 and lambda_1 > -1 + delta");
  const int r = chain.size();
  const auto& pi = chain.stationary();
  d.measure = set_measure(chain, set);
  const auto ind = indicator(r, set);
  std::vector<double> h(r);
  for (int x = 0; x < r; ++x) h[x] = ind[x] - d.measure;
  double res = 0.0;
  for (int x = 0; x < r; ++x) {
    double mh = 0.0;
    for (int y = 0; y < r; ++y) mh += chain.transition(x, y) * h[y];
    const double diff = mh - (1.0 - d.gap) * h[x];
    res += pi[x] * diff * diff;
  }
  d.residual = std::sqrt(res);
  d.equality = d.residual <= 1e-9;
  for (int k = 1; k <= 8; ++k) {
    const StayQuery q(std::vector<ReversibleChain>(k, chain), std::vector<StateSet>(k + 1, set));
    d.max_bound_gap = std::max(d.max_bound_gap, std::fabs(aks_bound(q) - stay_probability_exact(q)));
  }
  return d;
}

double empirical_contraction(const ReversibleChain& chain, const std::vector<StateSet>& sets, int k) {
  require(k >= 1, ErrorCode::MalformedInput, "need k >= 1");
  double worst = 0.0;
  for (const auto& set : sets) {
    const StayQuery q(std::vector<ReversibleChain>(k, chain), std::vector<StateSet>(k + 1, set));
    const double bound = aks_bound(q);
    if (bound <= 0.0) continue;
    worst = std::max(worst, std::pow(stay_probability_exact(q) / bound, 1.0 / k));
  }
  return worst;
}

}  // namespace nicd
