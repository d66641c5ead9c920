#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "nicd/jacobi.hpp"
#include "nicd/markov.hpp"
#include "nicd/tree_nicd.hpp"

using namespace nicd;

namespace {

// Random reversible chain from symmetric weights: m = w / rowsum, pi ~ rowsum.
ReversibleChain random_chain(std::mt19937_64& g, int r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> w(r, std::vector<double>(r));
  for (int x = 0; x < r; ++x) {
    for (int y = x; y < r; ++y) w[x][y] = w[y][x] = u(g) + (y == x + 1 ? 0.1 : 0.0);
  }
  for (auto& row : w) {
    double s = 0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
  }
  return ReversibleChain(w);
}

// Sum over all state sequences inside the sets.
double enumerate_stay(const std::vector<ReversibleChain>& chains, const std::vector<StateSet>& sets) {
  const auto& pi = chains.front().stationary();
  std::function<double(int, int)> rec = [&](int i, int x) -> double {
    if (i == static_cast<int>(chains.size())) return 1.0;
    double s = 0.0;
    for (int y : sets[i + 1]) s += chains[i].transition(x, y) * rec(i + 1, y);
    return s;
  };
  double total = 0.0;
  for (int x : sets[0]) total += pi[x] * rec(0, x);
  return total;
}

ReversibleChain two_state(double rho) {
  const double a = 0.5 + 0.5 * rho;
  return ReversibleChain({{a, 1 - a}, {1 - a, a}});
}

}  // namespace

TEST_CASE("Jacobi on 2x2 matches the characteristic polynomial") {
  const double a = 2.0, b = -0.7, c = 0.5;
  const auto e = jacobi_eigen({a, b, b, c}, 2);
  const double mid = 0.5 * (a + c), rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  CHECK(e.values[0] == doctest::Approx(mid - rad).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(mid + rad).epsilon(1e-14));
}

TEST_CASE("Jacobi reconstructs random symmetric matrices") {
  std::mt19937_64 g(21);
  std::normal_distribution<double> nd;
  for (int r : {1, 3, 10, 33}) {
    std::vector<double> a(r * r);
    for (int i = 0; i < r; ++i) {
      for (int j = i; j < r; ++j) a[i * r + j] = a[j * r + i] = nd(g);
    }
    const auto e = jacobi_eigen(a, r);
    CHECK(e.off_norm <= 1e-13);
    for (int i = 1; i < r; ++i) CHECK(e.values[i - 1] <= e.values[i]);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        double rec = 0.0, dot = 0.0;
        for (int k = 0; k < r; ++k) {
          rec += e.vectors[i * r + k] * e.values[k] * e.vectors[j * r + k];
          dot += e.vectors[k * r + i] * e.vectors[k * r + j];
        }
        CHECK(rec == doctest::Approx(a[i * r + j]).epsilon(1e-10).scale(1.0));
        CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(ReversibleChain({{0.5, 0.6}, {0.5, 0.5}}), NicdError);
  CHECK_THROWS_AS(ReversibleChain({{1.5, -0.5}, {0.5, 0.5}}), NicdError);
  // a directed 3-cycle is not reversible
  try {
    ReversibleChain({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    FAIL("cycle accepted");
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::NotReversible);
  }
  // wrong stationary measure
  CHECK_THROWS_AS(ReversibleChain({{0.5, 0.5}, {0.25, 0.75}}, std::vector<double>{0.5, 0.5}), NicdError);
  // derived pi for a birth-death chain
  const ReversibleChain bd({{0.5, 0.5, 0}, {0.25, 0.5, 0.25}, {0, 0.5, 0.5}});
  CHECK(bd.stationary()[0] == doctest::Approx(0.25));
  CHECK(bd.stationary()[1] == doctest::Approx(0.5));
  // reducible: pi cannot be derived; with pi given the chain is valid but not ergodic
  try {
    ReversibleChain({{1, 0}, {0, 1}});
    FAIL("reducible chain accepted");
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::NotErgodic);
  }
  const ReversibleChain id({{1, 0}, {0, 1}}, std::vector<double>{0.5, 0.5});
  CHECK_FALSE(id.is_ergodic());
  CHECK_THROWS_AS(spectral_gap(id), NicdError);
  // periodic: flip chain
  const ReversibleChain flip({{0, 1}, {1, 0}});
  CHECK(flip.is_irreducible());
  CHECK_FALSE(flip.is_ergodic());
}

TEST_CASE("spectra") {
  const auto two = spectral_decomposition(two_state(0.3));
  CHECK(two.eigenvalues[0] == doctest::Approx(0.3));
  CHECK(two.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(spectral_gap(two_state(0.3)) == doctest::Approx(0.7));
  // symmetric flip probability eps: gap 2 eps
  const double eps = 0.15;
  CHECK(spectral_gap(ReversibleChain({{1 - eps, eps}, {eps, 1 - eps}})) == doctest::Approx(2 * eps));

  const int n = 4;
  const double rho = 0.6;
  const auto chain = ReversibleChain::noise_chain(n, rho);
  const auto& ev = chain.spectrum().eigenvalues;
  std::vector<double> expected;
  for (CubeIndex u = 0; u < 16u; ++u) expected.push_back(std::pow(rho, level(u)));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 16; ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(spectral_gap(chain) == doctest::Approx(1 - rho));

  // complete graph: eigenvalue 1 and h - (1-h)/(r-1) with multiplicity r-1
  for (double h : {0.0, 0.3, 0.9}) {
    const int r = 7;
    const auto kg = ReversibleChain::complete_graph_walk(r, h);
    const double lam = h - (1 - h) / (r - 1);
    for (int i = 0; i < r - 1; ++i) CHECK(kg.spectrum().eigenvalues[i] == doctest::Approx(lam).epsilon(1e-12));
    CHECK(spectral_gap(kg) == doctest::Approx(std::min(1 + lam, 1 - lam)).epsilon(1e-12));
  }
}

TEST_CASE("eigenbasis is orthonormal in L2(pi) and reconstructs M") {
  std::mt19937_64 g(22);
  for (int r : {2, 5, 12}) {
    const auto chain = random_chain(g, r);
    const auto& sd = chain.spectrum();
    const auto& pi = chain.stationary();
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        double dot = 0.0;
        for (int x = 0; x < r; ++x) dot += pi[x] * sd.basis[i][x] * sd.basis[j][x];
        CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
      }
    }
    for (int x = 0; x < r; ++x) {
      for (int y = 0; y < r; ++y) {
        double m = 0.0;
        for (int i = 0; i < r; ++i) m += sd.eigenvalues[i] * sd.basis[i][x] * sd.basis[i][y] * pi[y];
        CHECK(m == doctest::Approx(chain.transition(x, y)).scale(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("stay probability agrees with path enumeration") {
  std::mt19937_64 g(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 2 + static_cast<int>(g() % 5);
    const int k = 1 + static_cast<int>(g() % 6);
    const auto base = random_chain(g, r);
    std::vector<ReversibleChain> chains(k, base);
    std::vector<StateSet> sets(k + 1);
    for (auto& s : sets) {
      for (int x = 0; x < r; ++x) {
        if (g() % 2) s.push_back(x);
      }
    }
    const StayQuery q(chains, sets);
    CHECK(stay_probability_exact(q) == doctest::Approx(enumerate_stay(chains, sets)).scale(1.0).epsilon(1e-12));
    CHECK(aks_bound(q) >= stay_probability_exact(q) - 1e-12);
  }
}

TEST_CASE("stay probability and bound examples") {
  const auto t = two_state(0.5);
  const StayQuery q({t}, {{0}, {0}});
  CHECK(stay_probability_exact(q) == doctest::Approx(0.375));
  CHECK(aks_bound(q) == doctest::Approx(0.375));
  CHECK(stay_probability_exact(StayQuery({t, t}, {{0, 1}, {0, 1}, {0, 1}})) == doctest::Approx(1.0));
  CHECK(aks_bound(StayQuery({t, t}, {{0, 1}, {0, 1}, {0, 1}})) == doctest::Approx(1.0));
  CHECK(stay_probability_exact(StayQuery({t, t}, {{0}, {}, {0}})) == 0.0);

  // constant sets of measure sigma: sigma [sigma + (1 - delta)(1 - sigma)]^k
  const auto kg = ReversibleChain::complete_graph_walk(8, 0.2);
  const double delta = spectral_gap(kg);
  const StateSet a{0, 3, 5};
  const double sigma = 3.0 / 8;
  for (int k = 1; k <= 5; ++k) {
    const StayQuery qk(std::vector<ReversibleChain>(k, kg), std::vector<StateSet>(k + 1, a));
    CHECK(aks_bound(qk) == doctest::Approx(sigma * std::pow(sigma + (1 - delta) * (1 - sigma), k)));
  }
  CHECK_THROWS_AS(StayQuery({t}, {{0}}), NicdError);
  CHECK_THROWS_AS(StayQuery({t, two_state(0.5)}, {{0}, {0}, {5}}), NicdError);
  const ReversibleChain other({{0.5, 0.5}, {0.25, 0.75}});
  CHECK_THROWS_AS(StayQuery({t, other}, {{0}, {0}, {0}}), NicdError);
}

TEST_CASE("projection operator norm") {
  const auto t = two_state(0.5);
  CHECK(projection_operator_norm(t, {0, 1}, {0, 1}) == doctest::Approx(1.0));
  CHECK(projection_operator_norm(t, {}, {0, 1}) == 0.0);
  CHECK(projection_operator_norm(t, {0}, {0}) == doctest::Approx(0.75));

  std::mt19937_64 g(24);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 2 + static_cast<int>(g() % 10);
    const auto chain = random_chain(g, r);
    if (!chain.is_ergodic()) continue;
    StateSet a, b, a_big;
    for (int x = 0; x < r; ++x) {
      const bool in = g() % 2;
      if (in) a.push_back(x);
      if (in || g() % 2) a_big.push_back(x);
      if (g() % 2) b.push_back(x);
    }
    const double norm = projection_operator_norm(chain, a, b);
    const double delta = spectral_gap(chain);
    const double bound = 1 - delta * (1 - std::sqrt(set_measure(chain, a) * set_measure(chain, b)));
    CHECK(norm <= bound + 1e-10);
    CHECK(norm <= projection_operator_norm(chain, a_big, b) + 1e-12);
  }
}

TEST_CASE("equality case") {
  const auto d = equality_case_check(two_state(0.4), {0});
  CHECK(d.equality);
  CHECK(d.max_bound_gap <= 1e-10);

  const int n = 3;
  const auto chain = ReversibleChain::noise_chain(n, 0.5);
  StateSet half, maj;
  for (int x = 0; x < 8; ++x) {
    if (coordinate(x, 0) == 1) half.push_back(x);
    if (coordinate(x, 0) + coordinate(x, 1) + coordinate(x, 2) > 0) maj.push_back(x);
  }
  const auto dh = equality_case_check(chain, half);
  CHECK(dh.equality);
  for (int k = 1; k <= 8; ++k) {
    const StayQuery q(std::vector<ReversibleChain>(k, chain), std::vector<StateSet>(k + 1, half));
    CHECK(stay_probability_exact(q) == doctest::Approx(0.5 * std::pow(0.75, k)).epsilon(1e-12));
    CHECK(aks_bound(q) == doctest::Approx(0.5 * std::pow(0.75, k)).epsilon(1e-12));
  }
  const auto dm = equality_case_check(chain, maj);
  CHECK_FALSE(dm.equality);
  // residual from the level-3 Fourier mass of MAJ_3: the indicator minus its
  // mean is (x1+x2+x3)/4 - x1x2x3/4, and only the top level misses 1 - delta.
  const double rho = 0.5;
  CHECK(dm.residual == doctest::Approx(0.25 * std::fabs(rho * rho * rho - rho)).epsilon(1e-10));

  try {
    equality_case_check(two_state(0.0), {0});
    FAIL("delta = 1 accepted");
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::InapplicableHypotheses);
  }
}

TEST_CASE("path success splits into two stay probabilities") {
  std::mt19937_64 g(25);
  for (int n = 1; n <= 3; ++n) {
    for (int len = 1; len <= 5; ++len) {
      const double rho = 0.35 + 0.1 * n;
      std::vector<int> players;
      for (int v = 0; v <= len; ++v) {
        if (v == 0 || v == len || g() % 2) players.push_back(v);
      }
      const auto inst = NicdInstance::path(len, CorrelationParam(rho), n, players);
      std::vector<double> v(std::size_t{1} << n, -1.0);
      std::fill(v.begin(), v.begin() + v.size() / 2, 1.0);
      std::shuffle(v.begin(), v.end(), g);
      const BooleanFunction f{CubeFunction(n, v)};
      const double success = success_probability(inst, Protocol::simple(inst.players(), f));

      StateSet a, ac;
      for (int x = 0; x < (1 << n); ++x) (f(x) == 1 ? a : ac).push_back(x);
      std::vector<ReversibleChain> chains;
      for (std::size_t i = 1; i < players.size(); ++i) {
        chains.push_back(ReversibleChain::noise_chain(n, std::pow(rho, players[i] - players[i - 1])));
      }
      const std::size_t k = chains.size();
      const double split = stay_probability_exact(StayQuery(chains, std::vector<StateSet>(k + 1, a))) +
                           stay_probability_exact(StayQuery(chains, std::vector<StateSet>(k + 1, ac)));
      CHECK(success == doctest::Approx(split).epsilon(1e-12));
    }
  }
}

TEST_CASE("empirical contraction stays below one off the equality case") {
  const auto chain = ReversibleChain::noise_chain(3, 0.5);
  StateSet maj;
  for (int x = 0; x < 8; ++x) {
    if (coordinate(x, 0) + coordinate(x, 1) + coordinate(x, 2) > 0) maj.push_back(x);
  }
  const double c = empirical_contraction(chain, {maj}, 6);
  CHECK(c > 0.0);
  CHECK(c < 1.0);
}
