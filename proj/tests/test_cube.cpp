#include <doctest.h>

#include <cmath>
#include <random>

#include "nicd/boolean.hpp"
#include "nicd/cube.hpp"
#include "oracles.hpp"

using namespace nicd;

namespace {

std::vector<double> random_table(std::mt19937_64& g, int n, bool positive) {
  std::uniform_real_distribution<double> u(positive ? 0.05 : -1.0, 1.0);
  std::vector<double> v(std::size_t{1} << n);
  for (double& x : v) x = u(g);
  return v;
}

}  // namespace

TEST_CASE("coordinate convention") {
  CHECK(coordinate(0b000, 0) == 1);
  CHECK(coordinate(0b001, 0) == -1);
  CHECK(coordinate(0b100, 2) == -1);
  CHECK(coordinate(0b100, 1) == 1);
  CHECK(level(0b1011) == 3);
}

TEST_CASE("correlation parameter") {
  CHECK(CorrelationParam(0.4).epsilon() == doctest::Approx(0.3));
  CHECK(CorrelationParam(0.4).agreement() == doctest::Approx(0.7));
  CHECK_THROWS_AS(CorrelationParam(-0.1), NicdError);
  CHECK_THROWS_AS(CorrelationParam(1.5), NicdError);
  CHECK_NOTHROW(CorrelationParam(0.0));
  CHECK_NOTHROW(CorrelationParam(1.0));
}

TEST_CASE("cube function validation") {
  CHECK_THROWS_AS(CubeFunction(2, {1.0, 2.0, 3.0}), NicdError);
  CHECK_THROWS_AS(CubeFunction::constant(25, 1.0), NicdError);
  const CubeFunction f(1, {0.0, 1.0});
  CHECK(f.is_zero_one());
  CHECK(f.is_nonnegative());
  CHECK_FALSE(f.is_boolean());
  CHECK(f.mean() == doctest::Approx(0.5));
}

TEST_CASE("Walsh-Hadamard matches the direct sum and inverts") {
  std::mt19937_64 g(1);
  for (int n = 1; n <= 6; ++n) {
    const auto v = random_table(g, n, false);
    const CubeFunction f(n, v);
    const auto hat = walsh_hadamard(f);
    const auto ref = oracle::fourier(v, n);
    for (std::size_t u = 0; u < v.size(); ++u) CHECK(hat[u] == doctest::Approx(ref[u]).epsilon(1e-12));
    const auto back = inverse_walsh_hadamard(hat);
    for (std::size_t x = 0; x < v.size(); ++x) CHECK(back[x] == doctest::Approx(v[x]).epsilon(1e-12));
  }
}

TEST_CASE("Fourier examples") {
  const auto dict = BooleanFunction::dictator(3, 2).table();
  const auto hat = walsh_hadamard(dict);
  for (CubeIndex u = 0; u < 8; ++u) CHECK(hat[u] == doctest::Approx(u == 0b010 ? 1.0 : 0.0));
  // Majority of three: 1/2 on each singleton, -1/2 on the full set.
  const auto maj = walsh_hadamard(BooleanFunction::majority(3, 3).table());
  CHECK(maj[0b001] == doctest::Approx(0.5));
  CHECK(maj[0b100] == doctest::Approx(0.5));
  CHECK(maj[0b111] == doctest::Approx(-0.5));
  CHECK(maj[0b011] == doctest::Approx(0.0));
}

TEST_CASE("noise operator agrees with direct convolution") {
  std::mt19937_64 g(2);
  for (int n = 1; n <= 6; ++n) {
    for (double rho : {0.0, 0.3, 0.77, 1.0}) {
      const auto v = random_table(g, n, false);
      const auto t = noise_operator(CubeFunction(n, v), CorrelationParam(rho));
      const auto ref = oracle::noise(v, n, rho);
      for (std::size_t x = 0; x < v.size(); ++x) CHECK(t[x] == doctest::Approx(ref[x]).epsilon(1e-12));
    }
  }
}

TEST_CASE("noise operator scales Fourier levels") {
  std::mt19937_64 g(3);
  const int n = 5;
  const double rho = 0.6;
  const CubeFunction f(n, random_table(g, n, false));
  const auto before = walsh_hadamard(f);
  const auto after = walsh_hadamard(noise_operator(f, CorrelationParam(rho)));
  for (CubeIndex u = 0; u < 32; ++u) {
    CHECK(after[u] == doctest::Approx(before[u] * std::pow(rho, level(u))).epsilon(1e-12));
  }
}

TEST_CASE("noise operator endpoints and semigroup") {
  std::mt19937_64 g(4);
  const CubeFunction f(4, random_table(g, 4, false));
  const auto id = noise_operator(f, CorrelationParam(1.0));
  const auto flat = noise_operator(f, CorrelationParam(0.0));
  for (CubeIndex x = 0; x < 16; ++x) {
    CHECK(id[x] == doctest::Approx(f[x]));
    CHECK(flat[x] == doctest::Approx(f.mean()));
  }
  const auto twice = noise_operator(noise_operator(f, CorrelationParam(0.5)), CorrelationParam(0.8));
  const auto once = noise_operator(f, CorrelationParam(0.4));
  for (CubeIndex x = 0; x < 16; ++x) CHECK(twice[x] == doctest::Approx(once[x]).epsilon(1e-12));
}

TEST_CASE("noise keeps nonnegative functions nonnegative") {
  std::vector<double> v(1u << 6, 0.0);
  v[5] = 1.0;
  const auto t = noise_operator(CubeFunction(6, v), CorrelationParam(0.999));
  CHECK(t.is_nonnegative());
}

TEST_CASE("p-norms") {
  std::mt19937_64 g(5);
  for (int n : {1, 3, 6}) {
    const auto v = random_table(g, n, true);
    const CubeFunction f(n, v);
    for (double p : {-3.0, -0.5, 0.0, 0.3, 1.0, 2.0, 5.5}) {
      CHECK(p_norm(f, p) == doctest::Approx(oracle::power_mean(v, p)).epsilon(1e-12));
    }
  }
  // dictator has |f| = 1 so every norm is 1
  const auto d = BooleanFunction::dictator(3, 1).table();
  for (double p : {1.0, 2.0, 4.0}) CHECK(p_norm(d, p) == doctest::Approx(1.0));
  // geometric mean of (1, 4)
  CHECK(p_norm(CubeFunction(1, {1.0, 4.0}), 0.0) == doctest::Approx(2.0));
  // zero entries: p <= 0 norms vanish, p > 0 norms do not
  const CubeFunction z(1, {0.0, 1.0});
  CHECK(p_norm(z, 0.0) == 0.0);
  CHECK(p_norm(z, -2.0) == 0.0);
  CHECK(p_norm(z, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(p_norm(CubeFunction(1, {-1.0, 1.0}), 0.5), NicdError);
  try {
    p_norm(CubeFunction(1, {-1.0, 1.0}), -1.0);
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::NegativeEntryForLowNorm);
  }
}

TEST_CASE("p-norm is continuous at p = 0 and monotone in p") {
  std::mt19937_64 g(6);
  const CubeFunction f(5, random_table(g, 5, true));
  const double gm = p_norm(f, 0.0);
  CHECK(p_norm(f, 1e-9) == doctest::Approx(gm).epsilon(1e-8));
  CHECK(p_norm(f, -1e-9) == doctest::Approx(gm).epsilon(1e-8));
  double prev = 0.0;
  for (double p = -4.0; p <= 4.0; p += 0.25) {
    const double v = p_norm(f, p);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}

TEST_CASE("correlated expectation agrees with the double sum") {
  std::mt19937_64 g(7);
  for (int n = 1; n <= 5; ++n) {
    const auto a = random_table(g, n, false);
    const auto b = random_table(g, n, false);
    for (double rho : {0.0, 0.25, 0.9}) {
      const double v = correlated_expectation(CubeFunction(n, a), CubeFunction(n, b), CorrelationParam(rho));
      CHECK(v == doctest::Approx(oracle::correlated(a, b, n, rho)).epsilon(1e-12));
      const double w = correlated_expectation(CubeFunction(n, b), CubeFunction(n, a), CorrelationParam(rho));
      CHECK(v == doctest::Approx(w).epsilon(1e-12));
    }
  }
  // two copies of a dictator agree with probability 1/2 + rho/2
  const auto d = BooleanFunction::dictator(2, 1).table();
  CHECK(correlated_expectation(d, d, CorrelationParam(0.3)) == doctest::Approx(0.3));
  CHECK_THROWS_AS(correlated_expectation(CubeFunction::constant(2, 1), CubeFunction::constant(3, 1),
                                         CorrelationParam(0.5)),
                  NicdError);
}

TEST_CASE("lazy walk agrees with the matrix power") {
  std::mt19937_64 g(8);
  std::bernoulli_distribution coin(0.4);
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> s(std::size_t{1} << n), t(s.size());
    for (auto& x : s) x = coin(g);
    for (auto& x : t) x = coin(g);
    s[0] = 1.0;
    for (int steps : {0, 1, 3, 10}) {
      const double v = lazy_walk_probability(CubeFunction(n, s), CubeFunction(n, t), steps);
      CHECK(v == doctest::Approx(oracle::lazy_walk(s, t, n, steps)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lazy walk half-cube closed form") {
  const auto half = BooleanFunction::dictator(10, 1).indicator(1);
  CHECK(lazy_walk_probability(half, half, 10) == doctest::Approx(0.5 + 0.5 * std::pow(0.9, 10)));
  const auto full = CubeFunction::constant(10, 1.0);
  CHECK(lazy_walk_probability(full, full, 7) == doctest::Approx(1.0));
  try {
    lazy_walk_probability(CubeFunction::constant(3, 0.0), CubeFunction::constant(3, 1.0), 1);
    FAIL("empty start set accepted");
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::EmptyStartSet);
  }
}
