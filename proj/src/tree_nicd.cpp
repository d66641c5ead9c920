#include "nicd/tree_nicd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nicd {

namespace {

std::string vstr(int v) { return std::to_string(v); }

}  // namespace

NicdInstance::NicdInstance(int vertex_count, std::vector<Edge> edges, CorrelationParam rho, int n,
                           std::vector<int> players)
    : vertex_count_(vertex_count),
      edges_(std::move(edges)),
      rho_(rho),
      n_(n),
      players_(std::move(players)) {
  CubeFunction::check_dimension(n);
  require(vertex_count_ >= 1, ErrorCode::InvalidTree, "tree needs at least one vertex");
  require(edges_.size() + 1 == static_cast<std::size_t>(vertex_count_), ErrorCode::InvalidTree,
          "a tree on " + vstr(vertex_count_) + " vertices has " + vstr(vertex_count_ - 1) +
              " edges, got " + vstr(static_cast<int>(edges_.size())));
  adjacency_.assign(vertex_count_, {});
  for (const auto& e : edges_) {
    require(e.u >= 0 && e.u < vertex_count_ && e.v >= 0 && e.v < vertex_count_,
            ErrorCode::InvalidTree, "edge endpoint out of range");
    require(e.u != e.v, ErrorCode::InvalidTree, "self-loop at " + vstr(e.u));
    auto& au = adjacency_[e.u];
    require(std::find(au.begin(), au.end(), e.v) == au.end(), ErrorCode::InvalidTree,
            "duplicate edge " + vstr(e.u) + "-" + vstr(e.v));
    au.push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  std::vector<char> seen(vertex_count_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : adjacency_[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  require(reached == vertex_count_, ErrorCode::InvalidTree, "edges do not connect all vertices");

  std::sort(players_.begin(), players_.end());
  players_.erase(std::unique(players_.begin(), players_.end()), players_.end());
  require(!players_.empty(), ErrorCode::MalformedInput, "player set is empty");
  for (int p : players_) {
    require(p >= 0 && p < vertex_count_, ErrorCode::MalformedInput, "player " + vstr(p) + " not a vertex");
  }
}

NicdInstance NicdInstance::path(int length, CorrelationParam rho, int n, std::vector<int> players) {
  require(length >= 0, ErrorCode::MalformedInput, "path length must be nonnegative");
  std::vector<Edge> edges;
  for (int i = 0; i < length; ++i) edges.push_back({i, i + 1});
  return NicdInstance(length + 1, std::move(edges), rho, n, std::move(players));
}

NicdInstance NicdInstance::full_path(int length, CorrelationParam rho, int n) {
  std::vector<int> players(length + 1);
  std::iota(players.begin(), players.end(), 0);
  return path(length, rho, n, std::move(players));
}

NicdInstance NicdInstance::star(int leaves, CorrelationParam rho, int n, bool centre_plays) {
  require(leaves >= 1, ErrorCode::MalformedInput, "star needs at least one leaf");
  std::vector<Edge> edges;
  std::vector<int> players;
  if (centre_plays) players.push_back(0);
  for (int i = 1; i <= leaves; ++i) {
    edges.push_back({0, i});
    players.push_back(i);
  }
  return NicdInstance(leaves + 1, std::move(edges), rho, n, std::move(players));
}

NicdInstance NicdInstance::star_plus_path(int k1, int k2, CorrelationParam rho, int n) {
  require(k1 >= 0 && k2 >= 0, ErrorCode::MalformedInput, "star/path sizes must be nonnegative");
  std::vector<Edge> edges;
  for (int i = 1; i <= k1; ++i) edges.push_back({0, i});
  int prev = 0;
  for (int j = 1; j <= k2; ++j) {
    edges.push_back({prev, k1 + j});
    prev = k1 + j;
  }
  std::vector<int> players(k1 + k2 + 1);
  std::iota(players.begin(), players.end(), 0);
  return NicdInstance(k1 + k2 + 1, std::move(edges), rho, n, std::move(players));
}

bool NicdInstance::is_player(int v) const {
  return std::binary_search(players_.begin(), players_.end(), v);
}

Protocol::Protocol(std::map<int, BooleanFunction> functions, bool allow_unbalanced)
    : functions_(std::move(functions)), allow_unbalanced_(allow_unbalanced) {
  require(!functions_.empty(), ErrorCode::MalformedInput, "protocol has no players");
  const int n = functions_.begin()->second.n();
  for (const auto& [v, f] : functions_) {
    require(f.n() == n, ErrorCode::ArityMismatch, "player " + vstr(v) + " uses a different arity");
    require(allow_unbalanced_ || f.is_balanced(), ErrorCode::UnbalancedFunction,
            "player " + vstr(v) + " function " + f.encoding() + " is not balanced");
  }
}

Protocol Protocol::simple(const std::vector<int>& players, const BooleanFunction& f,
                          bool allow_unbalanced) {
  std::map<int, BooleanFunction> m;
  for (int v : players) m.emplace(v, f);
  return Protocol(std::move(m), allow_unbalanced);
}

const BooleanFunction& Protocol::at(int v) const {
  auto it = functions_.find(v);
  require(it != functions_.end(), ErrorCode::MissingPlayerFunction, "no function for player " + vstr(v));
  return it->second;
}

bool Protocol::is_simple() const {
  const auto& first = functions_.begin()->second;
  return std::all_of(functions_.begin(), functions_.end(),
                     [&](const auto& kv) { return kv.second == first; });
}

std::string Protocol::describe() const {
  if (is_simple()) return "simple " + functions_.begin()->second.encoding();
  std::string s;
  for (const auto& [v, f] : functions_) {
    if (!s.empty()) s += "; ";
    s += vstr(v) + "=" + f.encoding();
  }
  return s;
}

namespace {

void check_compatible(const NicdInstance& inst, const Protocol& prot) {
  for (int p : inst.players()) {
    const auto& f = prot.at(p);
    require(f.n() == inst.n(), ErrorCode::ArityMismatch,
            "player " + vstr(p) + " has " + vstr(f.n()) + " inputs, instance has n = " + vstr(inst.n()));
  }
  for (const auto& [v, f] : prot.functions()) {
    require(inst.is_player(v), ErrorCode::MalformedInput, "vertex " + vstr(v) + " is not a player");
  }
}

}  // namespace

double success_probability(const NicdInstance& inst, const Protocol& prot, std::optional<int> root) {
  check_compatible(inst, prot);
  const int r = root.value_or(0);
  require(r >= 0 && r < inst.vertex_count(), ErrorCode::MalformedInput, "root is not a vertex");

  const auto& adj = inst.adjacency();
  const int nv = inst.vertex_count();
  std::vector<int> parent(nv, -1);
  std::vector<int> order;
  order.reserve(nv);
  order.push_back(r);
  parent[r] = r;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    for (int w : adj[u]) {
      if (parent[w] < 0) {
        parent[w] = u;
        order.push_back(w);
      }
    }
  }

  const std::size_t size = std::size_t{1} << inst.n();
  const double rho = inst.rho().rho();
  double total = 0.0;
  std::vector<std::vector<double>> msg(nv);
  for (int b : {1, -1}) {
    for (int v = 0; v < nv; ++v) {
      msg[v].assign(size, 1.0);
      if (inst.is_player(v)) {
        const auto& f = prot.at(v);
        for (CubeIndex x = 0; x < size; ++x) msg[v][x] = f(x) == b ? 1.0 : 0.0;
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      if (v == r) break;
      apply_noise(msg[v], inst.n(), rho);
      auto& up = msg[parent[v]];
      for (std::size_t x = 0; x < size; ++x) up[x] *= msg[v][x];
    }
    total += std::accumulate(msg[r].begin(), msg[r].end(), 0.0) / static_cast<double>(size);
  }
  return total;
}

double brute_force_success(const NicdInstance& inst, const Protocol& prot) {
  check_compatible(inst, prot);
  const int nv = inst.vertex_count();
  const int n = inst.n();
  require(static_cast<long>(nv) * n <= 24, ErrorCode::TooLargeForBruteForce,
          "n * |V| = " + vstr(nv * n) + " exceeds 24");

  // Single-coordinate measure P(alpha), bit v of alpha set <=> vertex v sees -1.
  const std::size_t labels = std::size_t{1} << nv;
  std::vector<double> measure(labels);
  const double agree = inst.rho().agreement();
  const double disagree = inst.rho().epsilon();
  for (std::size_t a = 0; a < labels; ++a) {
    double w = 0.5;
    for (const auto& e : inst.edges()) w *= (((a >> e.u) ^ (a >> e.v)) & 1u) ? disagree : agree;
    measure[a] = w;
  }

  const auto& players = inst.players();
  std::vector<const BooleanFunction*> fns;
  for (int p : players) fns.push_back(&prot.at(p));

  const std::uint64_t total_labelings = std::uint64_t{1} << (nv * n);
  const std::uint64_t mask = labels - 1;
  double success = 0.0;
  std::vector<CubeIndex> strings(nv);
  for (std::uint64_t lab = 0; lab < total_labelings; ++lab) {
    double w = 1.0;
    std::fill(strings.begin(), strings.end(), 0);
    for (int c = 0; c < n; ++c) {
      const std::uint64_t alpha = (lab >> (c * nv)) & mask;
      w *= measure[alpha];
      for (int v = 0; v < nv; ++v) strings[v] |= static_cast<CubeIndex>((alpha >> v) & 1u) << c;
    }
    if (w == 0.0) continue;
    const int first = (*fns[0])(strings[players[0]]);
    bool agree_all = true;
    for (std::size_t k = 1; k < players.size() && agree_all; ++k) {
      agree_all = (*fns[k])(strings[players[k]]) == first;
    }
    if (agree_all) success += w;
  }
  return success;
}

double path_closed_form(std::span<const int> gaps, CorrelationParam rho) {
  require(!gaps.empty(), ErrorCode::MalformedInput, "need at least one gap");
  double log_sum = 0.0;
  for (int g : gaps) {
    require(g >= 1, ErrorCode::MalformedInput, "gaps must be positive");
    log_sum += std::log(0.5 + 0.5 * std::pow(rho.rho(), g));
  }
  return std::exp(log_sum);
}

double star_dictator_closed_form(int k, CorrelationParam rho) {
  require(k >= 1, ErrorCode::MalformedInput, "star needs k >= 1 leaves");
  const double a = std::exp(k * std::log(rho.agreement()));
  const double b = rho.epsilon() > 0.0 ? std::exp(k * std::log(rho.epsilon())) : 0.0;
  return a + b;
}

Protocol monotone_shift(const Protocol& prot, int coord) {
  const int n = prot.functions().begin()->second.n();
  require(coord >= 0 && coord < n, ErrorCode::MalformedInput,
          "shift coordinate " + vstr(coord) + " outside 0.." + vstr(n - 1));
  const CubeIndex bit = CubeIndex{1} << coord;
  std::map<int, BooleanFunction> shifted;
  for (const auto& [v, f] : prot.functions()) {
    if (f.is_monotone_in(coord)) {
      shifted.emplace(v, f);
      continue;
    }
    std::vector<double> t(f.table().values().begin(), f.table().values().end());
    for (CubeIndex x = 0; x < t.size(); ++x) {
      if ((x & bit) || t[x] == t[x | bit]) continue;
      t[x] = 1.0;         // x_coord = +1
      t[x | bit] = -1.0;  // x_coord = -1
    }
    shifted.emplace(v, BooleanFunction(CubeFunction(n, std::move(t))));
  }
  return Protocol(std::move(shifted), prot.allow_unbalanced());
}

MonotonizeResult monotonize(const Protocol& prot) {
  MonotonizeResult result{prot, 0, 0};
  const int n = prot.functions().begin()->second.n();
  auto all_monotone = [](const Protocol& p) {
    return std::all_of(p.functions().begin(), p.functions().end(),
                       [](const auto& kv) { return kv.second.is_monotone(); });
  };
  // One sweep always suffices; the bound only guards against a broken shift.
  while (!all_monotone(result.protocol) && result.passes <= n) {
    ++result.passes;
    for (int j = 0; j < n; ++j) {
      Protocol next = monotone_shift(result.protocol, j);
      for (const auto& [v, f] : next.functions()) {
        if (!(f == result.protocol.at(v))) {
          ++result.changed_shifts;
          break;
        }
      }
      result.protocol = std::move(next);
    }
  }
  return result;
}

bool is_simple_dictator(const Protocol& prot) {
  if (!prot.is_simple()) return false;
  const auto& f = prot.functions().begin()->second;
  for (int j = 1; j <= f.n(); ++j) {
    const auto d = BooleanFunction::dictator(f.n(), j);
    if (f == d || f == d.negated()) return true;
  }
  return false;
}

}  // namespace nicd
