#include "nicd/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "nicd/boolean.hpp"
#include "nicd/gaussian.hpp"
#include "nicd/markov.hpp"
#include "parallel.hpp"

namespace nicd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Outcome {
  double slack = kInf;
  std::string witness;
};

void merge(Outcome& into, Outcome o) {
  if (std::isnan(o.slack)) o.slack = -kInf;
  if (o.slack < into.slack || (o.slack == into.slack && o.witness < into.witness)) into = std::move(o);
}

CheckReport finish(std::string name, std::uint64_t trials, const Outcome& worst, double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.trials = trials;
  r.worst_slack = worst.slack;
  r.witness = worst.witness;
  r.tolerance = tolerance;
  r.passed = worst.slack >= -tolerance;
  return r;
}

// Trials run independently from per-trial streams; the worst outcome is
// chosen by (slack, witness) so the report does not depend on `jobs`.
template <class Fn>
CheckReport run_trials(std::string name, std::uint64_t trials, std::uint64_t seed, int jobs, double tolerance,
                       Fn&& fn) {
  require(trials >= 1, ErrorCode::MalformedInput, "need at least one trial");
  std::vector<Outcome> worst(detail::chunk_count(trials, jobs));
  detail::for_each_chunk(trials, jobs, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::for_trial(seed, i);
      Outcome o = fn(rng);
      o.witness = "trial=" + std::to_string(i) + ";" + o.witness;
      merge(worst[chunk], std::move(o));
    }
  });
  Outcome all;
  for (auto& w : worst) merge(all, std::move(w));
  return finish(std::move(name), trials, all, tolerance);
}

void normalize_max(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  if (m > 0.0) {
    for (double& x : v) x /= m;
  }
}

// Nonnegative test functions: log-normal tables plus indicator, sparse and
// two-point-style families so the zero-norm branches get exercised.
CubeFunction random_nonnegative(Rng& rng, int n, std::string& kind) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> v(size);
  switch (rng.below(4)) {
    case 0: {
      kind = "lognormal";
      const double spread = rng.uniform(0.1, 3.0);
      for (double& x : v) x = std::exp(spread * rng.normal());
      break;
    }
    case 1: {
      kind = "indicator";
      const double density = rng.uniform();
      for (double& x : v) x = rng.uniform() < density ? 1.0 : 0.0;
      break;
    }
    case 2: {
      kind = "sparse";
      const double zeros = 0.5 * rng.uniform();
      const double spread = rng.uniform(0.1, 2.0);
      for (double& x : v) x = rng.uniform() < zeros ? 0.0 : std::exp(spread * rng.normal());
      break;
    }
    default: {
      kind = "affine";
      const int j = rng.below(n);
      const double a = rng.uniform(-1.0, 1.0);
      for (CubeIndex i = 0; i < size; ++i) v[i] = 1.0 + a * coordinate(i, j);
      break;
    }
  }
  normalize_max(v);
  return CubeFunction(n, std::move(v));
}

CubeFunction random_set(Rng& rng, int n, bool nonempty) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> v(size, 0.0);
  switch (rng.below(4)) {
    case 0: {
      const double density = rng.uniform();
      for (double& x : v) x = rng.uniform() < density ? 1.0 : 0.0;
      break;
    }
    case 1: {
      const CubeIndex centre = static_cast<CubeIndex>(rng.bits() & (size - 1));
      const int radius = rng.below(n + 1);
      for (CubeIndex i = 0; i < size; ++i) v[i] = level(i ^ centre) <= radius ? 1.0 : 0.0;
      break;
    }
    case 2: {
      const CubeIndex fixed = static_cast<CubeIndex>(rng.bits() & (size - 1));
      const CubeIndex values = static_cast<CubeIndex>(rng.bits() & (size - 1));
      for (CubeIndex i = 0; i < size; ++i) v[i] = ((i ^ values) & fixed) == 0 ? 1.0 : 0.0;
      break;
    }
    default: {
      const int j = rng.below(n);
      for (CubeIndex i = 0; i < size; ++i) v[i] = coordinate(i, j) == 1 ? 1.0 : 0.0;
      break;
    }
  }
  if (nonempty && std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
    v[rng.bits() & (size - 1)] = 1.0;
  }
  return CubeFunction(n, std::move(v));
}

// Random tree: vertex v > 0 attaches to a uniform earlier vertex.
std::vector<Edge> random_tree(Rng& rng, int vertices) {
  std::vector<Edge> edges;
  for (int v = 1; v < vertices; ++v) edges.push_back({rng.below(v), v});
  return edges;
}

std::string edges_text(const std::vector<Edge>& edges) {
  std::string s = "[";
  for (const auto& e : edges) s += "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
  return s + "]";
}

BooleanFunction random_balanced(Rng& rng, int n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> v(size, -1.0);
  std::fill(v.begin(), v.begin() + size / 2, 1.0);
  for (std::size_t i = size - 1; i > 0; --i) std::swap(v[i], v[rng.below(static_cast<int>(i + 1))]);
  return BooleanFunction(CubeFunction(n, std::move(v)));
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix(seed ^ splitmix(index))); }

double Rng::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
}

CheckReport check_forward_bb(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  CubeFunction::check_dimension(n_max);
  return run_trials("check_forward_bb", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 1 + rng.below(n_max);
    std::vector<double> v(std::size_t{1} << n);
    if (rng.below(2) == 0) {
      for (double& x : v) x = rng.normal();
    } else {
      for (double& x : v) x = rng.uniform() < 0.5 ? 0.0 : (rng.below(2) ? 1.0 : -1.0);
    }
    normalize_max(v);
    const CubeFunction f(n, std::move(v));
    const double p = rng.uniform(1.0, 4.0);
    const double q = rng.uniform(p, 8.0);
    double rho = q > p ? std::sqrt((p - 1.0) / (q - 1.0)) : 1.0;
    if (rng.below(2) == 0) rho *= rng.uniform();
    const double lhs = p_norm(noise_operator(f, CorrelationParam(rho)), q);
    const double rhs = p_norm(f, p);
    return Outcome{rhs - lhs, "n=" + std::to_string(n) + ";p=" + fmt(p) + ";q=" + fmt(q) + ";rho=" + fmt(rho)};
  });
}

CheckReport check_reverse_bb(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  CubeFunction::check_dimension(n_max);
  return run_trials("check_reverse_bb", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 1 + rng.below(n_max);
    std::string kind;
    const CubeFunction f = random_nonnegative(rng, n, kind);
    const double q = rng.uniform(-4.0, 1.0);
    const double p = rng.uniform(q, 1.0);
    double rho = std::sqrt((1.0 - p) / (1.0 - q));
    if (rng.below(2) == 0) rho *= rng.uniform();
    const double lhs = p_norm(noise_operator(f, CorrelationParam(rho)), q);
    const double rhs = p_norm(f, p);
    return Outcome{lhs - rhs, "n=" + std::to_string(n) + ";f=" + kind + ";p=" + fmt(p) + ";q=" + fmt(q) +
                                  ";rho=" + fmt(rho)};
  });
}

CheckReport check_two_function(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  CubeFunction::check_dimension(n_max);
  return run_trials("check_two_function", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 1 + rng.below(n_max);
    std::string kf, kg;
    const CubeFunction f = random_nonnegative(rng, n, kf);
    const CubeFunction g = random_nonnegative(rng, n, kg);
    const double p = rng.uniform(-4.0, 1.0);
    const double q = rng.uniform(-4.0, 1.0);
    double rho = std::min(1.0, std::sqrt((1.0 - p) * (1.0 - q)));
    if (rng.below(2) == 0) rho *= rng.uniform();
    const double lhs = correlated_expectation(f, g, CorrelationParam(rho));
    const double rhs = p_norm(f, p) * p_norm(g, q);
    return Outcome{lhs - rhs, "n=" + std::to_string(n) + ";f=" + kf + ";g=" + kg + ";p=" + fmt(p) +
                                  ";q=" + fmt(q) + ";rho=" + fmt(rho)};
  });
}

CheckReport check_two_point_coefficients(double p, double q, int terms) {
  require(0.0 < q && q < p && p < 1.0, ErrorCode::DomainError, "need 0 < q < p < 1");
  require(terms >= 1 && terms <= 50, ErrorCode::DomainError, "terms must lie in 1..50");
  const double log_rho = 0.5 * (std::log1p(-p) - std::log1p(-q));
  Outcome worst;
  // Products over m = 1..2N-1, compared in log space.
  double lhs = 0.0, rhs = 0.0;
  for (int m = 1, nn = 1; nn <= terms; ++nn) {
    for (; m <= 2 * nn - 1; ++m) {
      lhs += std::log(m - q);
      rhs += std::log(m - p);
    }
    merge(worst, {rhs - (lhs + 2.0 * nn * log_rho), "product;n=" + std::to_string(nn)});
  }
  const double rho = std::exp(log_rho);
  for (int m = 2; m <= 2 * terms - 1; ++m) {
    merge(worst, {(m - p) - rho * (m - q), "factor;m=" + std::to_string(m)});
  }
  worst.witness = "p=" + fmt(p) + ";q=" + fmt(q) + ";" + worst.witness;
  return finish("check_two_point_coefficients", static_cast<std::uint64_t>(terms), worst, 1e-10);
}

CheckReport check_two_point_coefficients_random(std::uint64_t trials, std::uint64_t seed, int terms) {
  return run_trials("check_two_point_coefficients", trials, seed, 1, 1e-10, [&](Rng& rng) {
    double a = rng.uniform(), b = rng.uniform();
    if (a == b || a == 0.0 || b == 0.0) a = 0.25, b = 0.75;
    const auto r = check_two_point_coefficients(std::max(a, b), std::min(a, b), terms);
    return Outcome{r.worst_slack, r.witness};
  });
}

CheckReport check_reverse_holder(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  CubeFunction::check_dimension(n_max);
  return run_trials("check_reverse_holder", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 1 + rng.below(n_max);
    std::string kf, kg;
    const CubeFunction f = random_nonnegative(rng, n, kf);
    const CubeFunction g = random_nonnegative(rng, n, kg);
    const double p = rng.below(8) == 0 ? 0.0 : rng.uniform(-4.0, 0.95);
    const double pd = p == 0.0 ? 0.0 : p / (p - 1.0);
    const double lhs = pointwise_product(f, g).mean();
    const double rhs = p_norm(f, p) * p_norm(g, pd);
    Outcome o{lhs - rhs, "n=" + std::to_string(n) + ";f=" + kf + ";g=" + kg + ";p=" + fmt(p)};
    // Equality at g = f^{p/p'} = f^{p-1} for strictly positive f.
    if (f.values()[0] > 0.0 && std::all_of(f.values().begin(), f.values().end(), [](double x) { return x > 0.0; })) {
      auto e = CubeFunction::tabulate(n, [&](CubeIndex i) { return std::pow(f[i], p - 1.0); });
      const double el = pointwise_product(f, e).mean();
      const double er = p_norm(f, p) * p_norm(e, pd);
      const double gap = -std::fabs(el - er) / std::max(1.0, std::fabs(el));
      if (gap < o.slack) o = {gap, o.witness + ";equality"};
    }
    return o;
  });
}

CheckReport check_isoperimetric_sets(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  require(n_max >= 1 && n_max <= 12, ErrorCode::DomainError, "random-set part needs n <= 12");
  auto report = run_trials("check_isoperimetric_sets", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 1 + rng.below(n_max);
    const CubeFunction s_set = random_set(rng, n, true);
    const CubeFunction t_set = random_set(rng, n, true);
    const double rho = rng.uniform(0.0, 0.95);
    const double s = std::sqrt(std::max(0.0, -2.0 * std::log(s_set.mean())));
    const double t = std::sqrt(std::max(0.0, -2.0 * std::log(t_set.mean())));
    const double exact = correlated_expectation(s_set, t_set, CorrelationParam(rho));
    return Outcome{exact - isop_lower_bound(s, t, rho),
                   "n=" + std::to_string(n) + ";s=" + fmt(s) + ";t=" + fmt(t) + ";rho=" + fmt(rho)};
  });

  // Opposed Hamming balls {sum x <= -s sqrt n} and {sum y >= t sqrt n}.
  constexpr int n = 14;
  const double root = std::sqrt(static_cast<double>(n));
  Outcome ball;
  double worst_ratio = 0.0;
  for (double rho : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double s = 1.0 + 0.1 * i, t = 1.0 + 0.1 * j;
        auto sum = [](CubeIndex x) { return n - 2 * level(x); };
        const auto a = CubeFunction::tabulate(n, [&](CubeIndex x) { return sum(x) <= -s * root ? 1.0 : 0.0; });
        const auto b = CubeFunction::tabulate(n, [&](CubeIndex x) { return sum(x) >= t * root ? 1.0 : 0.0; });
        const double exact = correlated_expectation(a, b, CorrelationParam(rho));
        const double iso = isop_lower_bound(s, t, rho);
        const double prefactor = hamming_ball_limit_upper(s, t, rho) / iso;
        const double ratio = exact / iso / prefactor;
        worst_ratio = std::max(worst_ratio, ratio);
        merge(ball, {4.0 - ratio, "hamming;n=14;s=" + fmt(s) + ";t=" + fmt(t) + ";rho=" + fmt(rho)});
      }
    }
  }
  report.details.emplace_back("hamming_worst_ratio", worst_ratio);
  report.trials += 5 * 121;
  if (ball.slack < report.worst_slack) {
    report.worst_slack = ball.slack;
    report.witness = ball.witness;
  }
  report.passed = report.worst_slack >= -report.tolerance;
  return report;
}

CheckReport check_walk_bound(int n_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  require(n_max >= 2 && n_max <= 14, ErrorCode::DomainError, "walk check needs 2 <= n <= 14");
  return run_trials("check_walk_bound", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int n = 2 + rng.below(n_max - 1);
    CubeFunction s_set = random_set(rng, n, true);
    if (s_set.mean() == 1.0) s_set[0] = 0.0;
    const CubeFunction t_set = random_set(rng, n, true);
    static constexpr double kTaus[] = {0.2, 0.5, 1.0};
    const double tau = kTaus[rng.below(3)];
    const auto steps = static_cast<std::uint64_t>(std::max(1L, std::lround(tau * n)));
    const double tau_eff = static_cast<double>(steps) / n;
    const double sigma = s_set.mean();
    const double alpha = std::log(t_set.mean()) / std::log(sigma);
    const auto bound = walk_bound(sigma, alpha, tau_eff, n);
    const double exact = lazy_walk_probability(s_set, t_set, steps);
    return Outcome{exact - (bound.main - bound.error), "n=" + std::to_string(n) + ";steps=" + std::to_string(steps) +
                                                          ";sigma=" + fmt(sigma) + ";alpha=" + fmt(alpha)};
  });
}

CheckReport check_fkg_measure(const NicdInstance& tree, std::uint64_t seed, int samples) {
  const int m = tree.vertex_count();
  require(m >= 1 && m <= 16, ErrorCode::DomainError, "FKG check enumerates at most 16 vertices");
  const double rho = tree.rho().rho();
  const double agree = 0.5 + 0.5 * rho, flip = 0.5 - 0.5 * rho;
  const CubeIndex size = CubeIndex{1} << m;
  // Configuration bit v set <=> vertex v carries -1.
  std::vector<double> measure(size);
  for (CubeIndex a = 0; a < size; ++a) {
    double w = 0.5;
    for (const auto& e : tree.edges()) w *= (((a >> e.u) ^ (a >> e.v)) & 1u) ? flip : agree;
    measure[a] = w;
  }
  std::vector<std::vector<char>> adjacent(m, std::vector<char>(m, 0));
  for (const auto& e : tree.edges()) adjacent[e.u][e.v] = adjacent[e.v][e.u] = 1;
  const double neighbour_ratio = rho < 1.0 ? std::pow((1.0 - rho) / (1.0 + rho), 2) : 0.0;

  Outcome worst;
  std::uint64_t count = 0;
  for (CubeIndex a = 0; a < size; ++a) {
    for (int u = 0; u < m; ++u) {
      if ((a >> u) & 1u) continue;  // u carries +1 in a
      for (int v = 0; v < m; ++v) {
        if (v == u || !((a >> v) & 1u)) continue;  // v carries -1 in a
        const CubeIndex b = a ^ (CubeIndex{1} << u) ^ (CubeIndex{1} << v);
        const CubeIndex join = a & b, meet = a | b;
        const double top = measure[join] * measure[meet];
        const double ratio = top > 0.0 ? measure[a] * measure[b] / top : 0.0;
        const double expected = adjacent[u][v] ? neighbour_ratio : 1.0;
        const double slack = std::min(1.0 - ratio, -std::fabs(ratio - expected));
        ++count;
        merge(worst, {slack, "pair;config=" + std::to_string(a) + ";u=" + std::to_string(u) + ";v=" +
                                 std::to_string(v)});
      }
    }
  }
  // Positive association on up-closures of random generators: an increasing
  // set here is a union of {b : b subset of g}.
  Rng rng(seed);
  auto increasing = [&] {
    std::vector<char> in(size, 0);
    const int gens = 1 + rng.below(3);
    for (int i = 0; i < gens; ++i) {
      const CubeIndex g = static_cast<CubeIndex>(rng.bits() & (size - 1));
      for (CubeIndex b = 0; b < size; ++b) {
        if ((b & ~g) == 0) in[b] = 1;
      }
    }
    return in;
  };
  for (int s = 0; s < samples; ++s) {
    const auto x = increasing();
    const auto y = increasing();
    const bool flip_y = rng.below(2) == 1;  // decreasing second set
    double px = 0, py = 0, pxy = 0;
    for (CubeIndex a = 0; a < size; ++a) {
      const bool iy = flip_y ? !y[a] : y[a];
      px += x[a] * measure[a];
      py += iy * measure[a];
      pxy += (x[a] && iy) * measure[a];
    }
    const double slack = flip_y ? px * py - pxy : pxy - px * py;
    ++count;
    merge(worst, {slack, "sets;sample=" + std::to_string(s) + (flip_y ? ";decreasing" : ";increasing")});
  }
  worst.witness = "tree=" + edges_text(tree.edges()) + ";rho=" + fmt(rho) + ";" + worst.witness;
  return finish("check_fkg_measure", count, worst, 1e-10);
}

CheckReport check_fkg_random_trees(int max_vertices, std::uint64_t trials, std::uint64_t seed, int jobs) {
  require(max_vertices >= 2 && max_vertices <= 12, ErrorCode::DomainError, "trees need 2..12 vertices");
  return run_trials("check_fkg_measure", trials, seed, jobs, 1e-10, [&](Rng& rng) {
    const int m = 2 + rng.below(max_vertices - 1);
    std::vector<int> players(m);
    std::iota(players.begin(), players.end(), 0);
    const NicdInstance tree(m, random_tree(rng, m), CorrelationParam(rng.uniform(0.0, 0.99)), 1, players);
    const auto r = check_fkg_measure(tree, rng.bits(), 16);
    return Outcome{r.worst_slack, r.witness};
  });
}

std::vector<double> conditional_hit_terms(int n, double rho, int ell_max) {
  require(n >= 1 && n <= 9 && n % 2 == 1, ErrorCode::DomainError, "majority set needs odd n <= 9");
  require(ell_max >= 0, ErrorCode::DomainError, "ell_max must be nonnegative");
  const CubeFunction a = BooleanFunction::majority(n, n).indicator(1);
  const CubeFunction h = noise_operator(a, CorrelationParam(rho));
  std::vector<double> w(a.values().begin(), a.values().end());
  std::vector<double> terms;
  for (int ell = 0; ell <= ell_max; ++ell) {
    double num = 0.0, den = 0.0;
    for (CubeIndex i = 0; i < w.size(); ++i) {
      num += w[i] * h[i];
      den += w[i];
    }
    terms.push_back(num / den);
    for (CubeIndex i = 0; i < w.size(); ++i) w[i] *= h[i];
  }
  return terms;
}

CheckReport check_conditional_hit_monotonicity(int n, double rho, int ell_max) {
  const auto terms = conditional_hit_terms(n, rho, ell_max);
  Outcome worst{0.0, "nondecreasing"};
  for (std::size_t l = 1; l < terms.size(); ++l) {
    merge(worst, {terms[l] - terms[l - 1], "ell=" + std::to_string(l)});
  }
  worst.witness = "n=" + std::to_string(n) + ";rho=" + fmt(rho) + ";" + worst.witness;
  auto r = finish("check_conditional_hit_monotonicity", terms.size(), worst, 1e-12);
  r.details.emplace_back("first_term", terms.front());
  r.details.emplace_back("dictator_term", 0.5 + 0.5 * rho);
  r.details.emplace_back("last_term", terms.back());
  return r;
}

CheckReport check_maj_crossover(double rho, int n, int r, int k_max) {
  require(k_max >= 1, ErrorCode::DomainError, "k_max must be positive");
  const auto maj = BooleanFunction::majority(n, r);
  const auto dict = BooleanFunction::dictator(n, 1);
  std::vector<double> diff;  // MAJ_r - dictator for k = 1..k_max
  for (int k = 1; k <= k_max; ++k) {
    const auto star = NicdInstance::star(k, CorrelationParam(rho), n, true);
    const double m = success_probability(star, Protocol::simple(star.players(), maj));
    const double d = success_probability(star, Protocol::simple(star.players(), dict));
    diff.push_back(m - d);
  }
  constexpr double kTie = 1e-12;
  Outcome worst{0.0, "upward-closed"};
  int crossover = 0, strict_crossover = 0;
  for (int k = 1; k <= k_max; ++k) {
    const double dk = diff[k - 1];
    if (crossover == 0 && dk >= -kTie) crossover = k;
    if (strict_crossover == 0 && dk > kTie) strict_crossover = k;
    // Once MAJ_r has matched (or beaten) the dictator it must keep doing so.
    if (crossover != 0 && dk < -kTie) merge(worst, {dk, "weak;k=" + std::to_string(k)});
    if (strict_crossover != 0 && dk <= kTie) merge(worst, {dk - kTie, "strict;k=" + std::to_string(k)});
  }
  worst.witness = "rho=" + fmt(rho) + ";n=" + std::to_string(n) + ";r=" + std::to_string(r) + ";" + worst.witness;
  auto rep = finish("check_maj_crossover", static_cast<std::uint64_t>(k_max), worst, 1e-12);
  rep.details.emplace_back("crossover_k", crossover);
  rep.details.emplace_back("strict_crossover_k", strict_crossover);
  return rep;
}

std::vector<std::pair<std::string, CubeFunction>> tpower_candidates(int n) {
  require(n >= 2, ErrorCode::DomainError, "candidates need n >= 2");
  std::vector<std::pair<std::string, CubeFunction>> out;
  out.emplace_back("half", BooleanFunction::dictator(n, 1).indicator(1));
  if (n % 2 == 1) out.emplace_back("majority", BooleanFunction::majority(n, n).indicator(1));
  out.emplace_back("subcube", CubeFunction::tabulate(n, [](CubeIndex i) {
                     return coordinate(i, 0) == 1 && coordinate(i, 1) == 1 ? 1.0 : 0.0;
                   }));
  return out;
}

CheckReport check_tpower_diagnostic(double rho, int n, const std::vector<int>& k_grid,
                                    const std::vector<std::pair<std::string, CubeFunction>>& candidates) {
  require(rho > 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in (0,1)");
  require(k_grid.size() >= 2, ErrorCode::DomainError, "k grid needs at least two points");
  const double nu = nu_of_rho(rho);
  Outcome worst;
  CheckReport rep;
  for (const auto& [name, f] : candidates) {
    require(f.n() == n && f.is_zero_one(), ErrorCode::DomainError, "candidate " + name + " must be zero-one on n bits");
    require(f.mean() <= 0.5, ErrorCode::DomainError, "candidate " + name + " has mean above 1/2");
    const CubeFunction h = noise_operator(f, CorrelationParam(rho));
    std::vector<double> xs, ys;
    for (int k : k_grid) {
      // log E[h^k] by log-sum-exp; h^k underflows long before k = 1024.
      double top = -kInf;
      for (double v : h.values()) {
        if (v > 0.0) top = std::max(top, k * std::log(v));
      }
      double s = 0.0;
      for (double v : h.values()) {
        if (v > 0.0) s += std::exp(k * std::log(v) - top);
      }
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(top + std::log(s) - n * std::log(2.0));
    }
    const double slope = least_squares_slope(xs, ys);
    rep.details.emplace_back("slope_" + name, slope);
    merge(worst, {(-nu + 0.2) - slope, "candidate=" + name + ";slope=" + fmt(slope)});
  }
  const int k_last = k_grid.back();
  rep.details.emplace_back("naive_bound_at_k_max", std::pow(0.5, k_last / (rho * rho * (k_last - 1) + 1.0)));
  rep.details.emplace_back("naive_bound_limit", std::pow(0.5, 1.0 / (rho * rho)));
  worst.witness = "rho=" + fmt(rho) + ";n=" + std::to_string(n) + ";" + worst.witness;
  auto out = finish("check_tpower_diagnostic", candidates.size(), worst, 0.0);
  out.details = std::move(rep.details);
  return out;
}

CheckReport check_aks_bound(int r_max, int k_max, std::uint64_t trials, std::uint64_t seed, int jobs) {
  require(r_max >= 2 && r_max <= 64, ErrorCode::DomainError, "r_max must lie in 2..64");
  require(k_max >= 1, ErrorCode::DomainError, "k_max must be positive");
  return run_trials("check_aks_bound", trials, seed, jobs, 1e-12, [&](Rng& rng) {
    const int r = 2 + rng.below(r_max - 1);
    const int k = 1 + rng.below(k_max);
    std::vector<double> pi(r);
    for (double& p : pi) p = std::exp(rng.normal());
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= total;

    // Metropolis chains for pi from random symmetric proposals; a random
    // Hamiltonian path keeps each proposal connected.
    auto metropolis = [&] {
      std::vector<std::vector<double>> w(r, std::vector<double>(r, 0.0));
      const double density = rng.uniform();
      for (int x = 0; x < r; ++x) {
        for (int y = x + 1; y < r; ++y) {
          if (rng.uniform() < density) w[x][y] = w[y][x] = rng.uniform();
        }
      }
      std::vector<int> order(r);
      std::iota(order.begin(), order.end(), 0);
      for (int i = r - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      for (int i = 0; i + 1 < r; ++i) {
        const double v = rng.uniform(0.1, 1.0);
        w[order[i]][order[i + 1]] = w[order[i + 1]][order[i]] = std::max(w[order[i]][order[i + 1]], v);
      }
      double widest = 0.0;
      for (const auto& row : w) widest = std::max(widest, std::accumulate(row.begin(), row.end(), 0.0));
      const double scale = 1.0 / (widest * rng.uniform(1.05, 3.0));
      std::vector<std::vector<double>> m(r, std::vector<double>(r, 0.0));
      for (int x = 0; x < r; ++x) {
        double off = 0.0;
        for (int y = 0; y < r; ++y) {
          if (y == x) continue;
          m[x][y] = w[x][y] * scale * std::min(1.0, pi[y] / pi[x]);
          off += m[x][y];
        }
        m[x][x] = 1.0 - off;
      }
      return ReversibleChain(std::move(m), pi);
    };
    std::vector<ReversibleChain> pool;
    const int distinct = 1 + rng.below(3);
    for (int i = 0; i < distinct; ++i) pool.push_back(metropolis());
    std::vector<ReversibleChain> chains;
    for (int i = 0; i < k; ++i) chains.push_back(pool[rng.below(distinct)]);
    std::vector<StateSet> sets(k + 1);
    for (auto& s : sets) {
      const int kind = rng.below(20);
      const double density = kind == 0 ? 1.0 : kind == 1 ? 0.0 : rng.uniform();
      for (int x = 0; x < r; ++x) {
        if (rng.uniform() < density || density == 1.0) s.push_back(x);
      }
    }
    const StayQuery q(std::move(chains), std::move(sets));
    const double exact = stay_probability_exact(q);
    const double bound = aks_bound(q);
    return Outcome{bound - exact, "r=" + std::to_string(r) + ";k=" + std::to_string(k) + ";chains=" +
                                      std::to_string(distinct) + ";exact=" + fmt(exact)};
  });
}

CheckReport check_monotone_shift(int max_vertices, int n, std::uint64_t trials, std::uint64_t seed, int jobs) {
  require(max_vertices >= 2 && max_vertices <= 8, ErrorCode::DomainError, "trees need 2..8 vertices");
  require(n >= 1 && n <= 6, ErrorCode::DomainError, "n must lie in 1..6");
  return run_trials("check_monotone_shift", trials, seed, jobs, 1e-12, [&](Rng& rng) {
    const int m = 2 + rng.below(max_vertices - 1);
    const auto edges = random_tree(rng, m);
    std::vector<int> players;
    for (int v = 0; v < m; ++v) {
      if (rng.below(3) != 0) players.push_back(v);
    }
    while (players.size() < 2) {
      const int v = rng.below(m);
      if (std::find(players.begin(), players.end(), v) == players.end()) players.push_back(v);
    }
    const double rho = rng.uniform(0.0, 1.0);
    const NicdInstance inst(m, edges, CorrelationParam(rho), n, players);
    std::map<int, BooleanFunction> fns;
    for (int v : inst.players()) fns.emplace(v, random_balanced(rng, n));
    Protocol prot(std::move(fns));
    double value = success_probability(inst, prot);
    double slack = kInf;
    int sweeps = 0;
    auto monotone = [&] {
      for (const auto& [v, f] : prot.functions()) {
        if (!f.is_monotone()) return false;
      }
      return true;
    };
    while (!monotone() && sweeps <= n) {
      ++sweeps;
      for (int c = 0; c < n; ++c) {
        Protocol next = monotone_shift(prot, c);
        const double nv = success_probability(inst, next);
        slack = std::min(slack, nv - value);
        prot = std::move(next);
        value = nv;
      }
    }
    if (!monotone() || sweeps > n) slack = -1.0;
    return Outcome{slack, "tree=" + edges_text(edges) + ";rho=" + fmt(rho) + ";sweeps=" + std::to_string(sweeps)};
  });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "check_forward_bb",       "check_reverse_bb",       "check_two_function",
      "check_two_point_coefficients", "check_reverse_holder", "check_isoperimetric_sets",
      "check_walk_bound",       "check_fkg_measure",      "check_conditional_hit_monotonicity",
      "check_maj_crossover",    "check_tpower_diagnostic", "check_aks_bound",
      "check_monotone_shift"};
  return names;
}

CheckReport run_check(const std::string& name, std::uint64_t seed, std::uint64_t trials, const CheckOptions& o) {
  const int jobs = o.jobs;
  if (name == "check_forward_bb") return check_forward_bb(o.n.value_or(8), trials, seed, jobs);
  if (name == "check_reverse_bb") return check_reverse_bb(o.n.value_or(8), trials, seed, jobs);
  if (name == "check_two_function") return check_two_function(o.n.value_or(8), trials, seed, jobs);
  if (name == "check_reverse_holder") return check_reverse_holder(o.n.value_or(8), trials, seed, jobs);
  if (name == "check_two_point_coefficients") {
    if (o.p && o.q) return check_two_point_coefficients(*o.p, *o.q, 50);
    return check_two_point_coefficients_random(trials, seed, 50);
  }
  if (name == "check_isoperimetric_sets") return check_isoperimetric_sets(o.n.value_or(12), trials, seed, jobs);
  if (name == "check_walk_bound") return check_walk_bound(o.n.value_or(14), trials, seed, jobs);
  if (name == "check_fkg_measure") return check_fkg_random_trees(o.n.value_or(8), trials, seed, jobs);
  if (name == "check_aks_bound") return check_aks_bound(o.r.value_or(64), o.k_max.value_or(10), trials, seed, jobs);
  if (name == "check_monotone_shift") return check_monotone_shift(6, o.n.value_or(3), trials, seed, jobs);
  // The remaining checks are deterministic sweeps; the seed is unused.
  using Part = std::pair<std::string, CheckReport>;  // label, report
  auto sweep = [](std::string check, std::vector<Part> parts) {
    CheckReport all;
    all.name = std::move(check);
    all.worst_slack = kInf;
    for (auto& [label, p] : parts) {
      all.trials += p.trials;
      all.tolerance = p.tolerance;
      if (p.worst_slack < all.worst_slack) {
        all.worst_slack = p.worst_slack;
        all.witness = p.witness;
      }
      for (auto& d : p.details) all.details.emplace_back(label + ":" + d.first, d.second);
    }
    all.passed = all.worst_slack >= -all.tolerance;
    return all;
  };
  if (name == "check_conditional_hit_monotonicity") {
    const int ell = o.ell_max.value_or(30);
    if (o.n && o.rho) return check_conditional_hit_monotonicity(*o.n, *o.rho, ell);
    std::vector<Part> parts;
    for (int n : {1, 3, 5, 7, 9}) {
      for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        parts.emplace_back("n=" + std::to_string(n) + ",rho=" + fmt(rho),
                           check_conditional_hit_monotonicity(n, rho, ell));
      }
    }
    return sweep(name, std::move(parts));
  }
  if (name == "check_maj_crossover") {
    const int k_max = o.k_max.value_or(50);
    if (o.r) return check_maj_crossover(o.rho.value_or(0.9), o.n.value_or(5), *o.r, k_max);
    std::vector<Part> parts;
    for (int r : {1, 3, 5}) {
      parts.emplace_back("r=" + std::to_string(r), check_maj_crossover(o.rho.value_or(0.9), o.n.value_or(5), r, k_max));
    }
    return sweep(name, std::move(parts));
  }
  if (name == "check_tpower_diagnostic") {
    const int n = o.n.value_or(9);
    const auto grid = o.k_grid.empty() ? geometric_grid(16, 1024, 10) : o.k_grid;
    if (o.rho) return check_tpower_diagnostic(*o.rho, n, grid, tpower_candidates(n));
    std::vector<Part> parts;
    for (double rho : {0.5, 0.7071067811865476, 0.9}) {
      parts.emplace_back("rho=" + fmt(rho), check_tpower_diagnostic(rho, n, grid, tpower_candidates(n)));
    }
    return sweep(name, std::move(parts));
  }
  throw NicdError(ErrorCode::MalformedInput, "unknown check '" + name + "'");
}

}  // namespace nicd
