#pragma once

// Non-interactive correlation distillation on trees.
//
// A uniform string in {-1,1}^n is placed at one vertex and copied across every
// tree edge through a binary symmetric channel of correlation rho. Each player
// applies its Boolean function to the string it sees; the protocol succeeds
// when all players output the same bit.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nicd/boolean.hpp"
#include "nicd/cube.hpp"

namespace nicd {

struct Edge {
  int u;
  int v;
};

class NicdInstance {
 public:
  NicdInstance(int vertex_count, std::vector<Edge> edges, CorrelationParam rho, int n,
               std::vector<int> players);

  /// Path v_0 - v_1 - ... - v_length.
  static NicdInstance path(int length, CorrelationParam rho, int n, std::vector<int> players);
  static NicdInstance full_path(int length, CorrelationParam rho, int n);
  /// Star with centre 0 and leaves 1..leaves.
  static NicdInstance star(int leaves, CorrelationParam rho, int n, bool centre_plays);
  /// Star (centre 0, leaves 1..k1) with a path k1+1..k1+k2 hanging off the
  /// centre; every vertex is a player.
  static NicdInstance star_plus_path(int k1, int k2, CorrelationParam rho, int n);

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  CorrelationParam rho() const { return rho_; }
  int n() const { return n_; }
  const std::vector<int>& players() const { return players_; }
  const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
  bool is_player(int v) const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  CorrelationParam rho_;
  int n_;
  std::vector<int> players_;
  std::vector<std::vector<int>> adjacency_;
};

/// Player vertex -> Boolean function. Balanced functions are required unless
/// `allow_unbalanced` is set.
class Protocol {
 public:
  explicit Protocol(std::map<int, BooleanFunction> functions, bool allow_unbalanced = false);

  static Protocol simple(const std::vector<int>& players, const BooleanFunction& f,
                         bool allow_unbalanced = false);

  const std::map<int, BooleanFunction>& functions() const { return functions_; }
  const BooleanFunction& at(int v) const;
  bool allow_unbalanced() const { return allow_unbalanced_; }
  bool is_simple() const;
  std::string describe() const;

 private:
  std::map<int, BooleanFunction> functions_;
  bool allow_unbalanced_;
};

/// Pr[all players output +1] + Pr[all output -1], by message passing from
/// `root` (default: vertex 0). Cost O(|V| n 2^n).
double success_probability(const NicdInstance& inst, const Protocol& prot,
                           std::optional<int> root = std::nullopt);

/// Same quantity by summing over all 2^{n|V|} joint labelings; n|V| <= 24.
double brute_force_success(const NicdInstance& inst, const Protocol& prot);

/// prod_j (1/2 + rho^{gap_j}/2), accumulated in log space.
double path_closed_form(std::span<const int> gaps, CorrelationParam rho);

/// Success of the dictator on a k-leaf star with the leaves as players.
double star_dictator_closed_form(int k, CorrelationParam rho);

/// Kleitman shift in coordinate `coord` (0-based) applied to every player:
/// each pair differing only there with different values becomes (+1 at
/// x_coord = +1, -1 at x_coord = -1).
Protocol monotone_shift(const Protocol& prot, int coord);

struct MonotonizeResult {
  Protocol protocol;
  int passes = 0;  // full sweeps over the coordinates
  int changed_shifts = 0;
};

/// Sweeps monotone_shift over all coordinates until every function is monotone.
MonotonizeResult monotonize(const Protocol& prot);

bool is_simple_dictator(const Protocol& prot);

// ---------------------------------------------------------------------------
// Searches

enum class FamilyKind { AllBalanced, MonotoneBalanced, Named };

struct FunctionFamily {
  FamilyKind kind = FamilyKind::AllBalanced;
  std::vector<BooleanFunction> named;
};

inline constexpr int kMaxAllBalancedDim = 4;
inline constexpr int kMaxMonotoneDim = 5;

/// Candidate list sorted by truth table. Throws FamilyTooLarge past the caps.
std::vector<BooleanFunction> enumerate_family(const FunctionFamily& family, int n);

struct SimpleSearchResult {
  BooleanFunction best;
  double value;
  std::size_t candidates;
};

/// argmax of the success of simple protocols drawn from `family`; ties within
/// 1e-12 relative go to the smallest truth table.
SimpleSearchResult best_simple_protocol(const NicdInstance& inst, const FunctionFamily& family,
                                        int jobs = 1);

struct ExhaustiveResult {
  double best_value = 0.0;
  std::vector<Protocol> optimal;  // every protocol within 1e-12 of the best
  std::size_t protocols = 0;
};

/// Every balanced protocol (not only simple ones); n <= 2 and at most 4 players.
ExhaustiveResult exhaustive_protocol_search(const NicdInstance& inst);

/// Success on star_plus_path(k1, k2) when the centre and path vertices use
/// `path_fn` and the leaves use `leaf_fn`, for all k1 in [0,k1_max] and
/// k2 in [0,k2_max]. Row-major in k1.
std::vector<double> star_path_success_table(CorrelationParam rho, const BooleanFunction& path_fn,
                                            const BooleanFunction& leaf_fn, int k1_max, int k2_max);

/// Dictator on coordinate 1 for the centre and path, majority of the last
/// three coordinates for the leaves.
Protocol star_path_mixed_protocol(int k1, int k2, int n);
BooleanFunction last_three_majority(int n);

struct CounterexampleEntry {
  int k1;
  int k2;
  double mixed;
  double best_simple;
  std::string best_simple_encoding;
};

struct CounterexampleReport {
  double rho;
  int n;
  int k1_min, k1_max, k2_min, k2_max;
  std::size_t candidates;
  std::vector<CounterexampleEntry> entries;  // ordered by (k1, k2)
};

CounterexampleReport counterexample_search(CorrelationParam rho, int n, int k1_min, int k1_max,
                                           int k2_min, int k2_max,
                                           const FunctionFamily& family = {}, int jobs = 1);

}  // namespace nicd
