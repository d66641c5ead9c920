#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "nicd/tree_nicd.hpp"
#include "parallel.hpp"

namespace nicd {

namespace {

BooleanFunction from_mask(int n, std::uint32_t mask) {
  return BooleanFunction(
      CubeFunction::tabulate(n, [&](CubeIndex x) { return (mask >> x) & 1u ? 1.0 : -1.0; }));
}

// Functions on 2^m points that are nondecreasing in every index bit, as bitmasks.
std::vector<std::uint32_t> bit_increasing(int m) {
  if (m == 0) return {0u, 1u};
  const auto half = bit_increasing(m - 1);
  const int shift = 1 << (m - 1);
  std::vector<std::uint32_t> out;
  for (auto lo : half) {
    for (auto hi : half) {
      if ((lo & ~hi) == 0) out.push_back(lo | (hi << shift));
    }
  }
  return out;
}

void sort_by_truth_table(std::vector<BooleanFunction>& fs) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (std::size_t i = 0; i < fs.size(); ++i) keys.emplace_back(fs[i].truth_table(), i);
  std::sort(keys.begin(), keys.end());
  std::vector<BooleanFunction> sorted;
  sorted.reserve(fs.size());
  for (const auto& k : keys) sorted.push_back(fs[k.second]);
  fs = std::move(sorted);
}

}  // namespace

std::vector<BooleanFunction> enumerate_family(const FunctionFamily& family, int n) {
  CubeFunction::check_dimension(n);
  std::vector<BooleanFunction> out;
  const std::uint32_t points = 1u << n;
  switch (family.kind) {
    case FamilyKind::AllBalanced: {
      require(n <= kMaxAllBalancedDim, ErrorCode::FamilyTooLarge,
              "all balanced functions only up to n = " + std::to_string(kMaxAllBalancedDim));
      const std::uint32_t limit = points == 32 ? 0xFFFFFFFFu : (1u << points) - 1u;
      std::uint32_t mask = (1u << (points / 2)) - 1u;
      while (true) {
        out.push_back(from_mask(n, mask));
        // Gosper's hack: next mask with the same popcount.
        const std::uint32_t c = mask & (~mask + 1u);
        const std::uint32_t r = mask + c;
        if (r == 0 || r > limit) break;
        const std::uint32_t next = (((r ^ mask) >> 2) / c) | r;
        if (next > limit) break;
        mask = next;
      }
      break;
    }
    case FamilyKind::MonotoneBalanced: {
      require(n <= kMaxMonotoneDim, ErrorCode::FamilyTooLarge,
              "monotone balanced functions only up to n = " + std::to_string(kMaxMonotoneDim));
      // A set index bit means coordinate -1, so complementing the index turns
      // bit-increasing functions into coordinate-increasing ones.
      for (auto m : bit_increasing(n)) {
        if (std::popcount(m) != static_cast<int>(points / 2)) continue;
        std::uint32_t flipped = 0;
        for (std::uint32_t x = 0; x < points; ++x) {
          if ((m >> (x ^ (points - 1))) & 1u) flipped |= 1u << x;
        }
        out.push_back(from_mask(n, flipped));
      }
      break;
    }
    case FamilyKind::Named:
      require(!family.named.empty(), ErrorCode::MalformedInput, "named family is empty");
      for (const auto& f : family.named) {
        require(f.n() == n, ErrorCode::ArityMismatch, f.encoding() + " does not have n = " + std::to_string(n));
        out.push_back(f);
      }
      break;
  }
  sort_by_truth_table(out);
  return out;
}

SimpleSearchResult best_simple_protocol(const NicdInstance& inst, const FunctionFamily& family, int jobs) {
  const auto candidates = enumerate_family(family, inst.n());
  std::vector<double> values(candidates.size());
  detail::for_each_chunk(candidates.size(), jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      values[i] = success_probability(inst, Protocol::simple(inst.players(), candidates[i]));
    }
  });
  const double top = *std::max_element(values.begin(), values.end());
  const double cutoff = top - 1e-12 * std::max(1.0, std::fabs(top));
  // candidates are sorted by truth table, so the first near-maximum wins ties
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= cutoff) return {candidates[i], values[i], candidates.size()};
  }
  return {candidates.front(), values.front(), candidates.size()};
}

ExhaustiveResult exhaustive_protocol_search(const NicdInstance& inst) {
  const auto& players = inst.players();
  require(inst.n() <= 2 && players.size() <= 4, ErrorCode::FamilyTooLarge,
          "exhaustive protocol search needs n <= 2 and at most 4 players");
  const auto balanced = enumerate_family({FamilyKind::AllBalanced, {}}, inst.n());
  const std::size_t base = balanced.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < players.size(); ++i) total *= base;

  std::vector<double> values(total);
  std::vector<Protocol> protocols;
  protocols.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::map<int, BooleanFunction> fns;
    std::size_t rest = code;
    for (int p : players) {
      fns.emplace(p, balanced[rest % base]);
      rest /= base;
    }
    protocols.emplace_back(std::move(fns));
    values[code] = success_probability(inst, protocols.back());
  }
  ExhaustiveResult result;
  result.protocols = total;
  result.best_value = *std::max_element(values.begin(), values.end());
  for (std::size_t code = 0; code < total; ++code) {
    if (values[code] >= result.best_value - 1e-12) result.optimal.push_back(protocols[code]);
  }
  return result;
}

std::vector<double> star_path_success_table(CorrelationParam rho, const BooleanFunction& path_fn,
                                            const BooleanFunction& leaf_fn, int k1_max, int k2_max) {
  require(path_fn.n() == leaf_fn.n(), ErrorCode::ArityMismatch, "path and leaf functions differ in arity");
  require(k1_max >= 0 && k2_max >= 0, ErrorCode::MalformedInput, "table bounds must be nonnegative");
  const int n = path_fn.n();
  const std::size_t size = std::size_t{1} << n;
  const std::size_t cols = static_cast<std::size_t>(k2_max) + 1;
  std::vector<double> table((static_cast<std::size_t>(k1_max) + 1) * cols, 0.0);
  std::vector<double> centre(size), leaf(size), weight(size);
  std::vector<double> path_msgs(cols * size);

  for (int b : {1, -1}) {
    for (CubeIndex x = 0; x < size; ++x) {
      centre[x] = path_fn(x) == b ? 1.0 : 0.0;
      leaf[x] = leaf_fn(x) == b ? 1.0 : 0.0;
    }
    apply_noise(leaf, n, rho.rho());
    // path_msgs[j] is the message reaching the centre from a path of j vertices
    std::fill(path_msgs.begin(), path_msgs.begin() + size, 1.0);
    for (std::size_t j = 1; j < cols; ++j) {
      double* cur = &path_msgs[j * size];
      const double* prev = &path_msgs[(j - 1) * size];
      for (std::size_t x = 0; x < size; ++x) cur[x] = centre[x] * prev[x];
      apply_noise(std::span<double>(cur, size), n, rho.rho());
    }
    weight = centre;
    for (int k1 = 0; k1 <= k1_max; ++k1) {
      double* row = &table[static_cast<std::size_t>(k1) * cols];
      for (std::size_t j = 0; j < cols; ++j) {
        const double* q = &path_msgs[j * size];
        double s = 0.0;
        for (std::size_t x = 0; x < size; ++x) s += weight[x] * q[x];
        row[j] += s / static_cast<double>(size);
      }
      for (std::size_t x = 0; x < size; ++x) weight[x] *= leaf[x];
    }
  }
  return table;
}

BooleanFunction last_three_majority(int n) {
  require(n >= 3, ErrorCode::MalformedInput, "need n >= 3 for a three-bit majority");
  return BooleanFunction(CubeFunction::tabulate(n, [&](CubeIndex x) {
    const int s = coordinate(x, n - 3) + coordinate(x, n - 2) + coordinate(x, n - 1);
    return s > 0 ? 1.0 : -1.0;
  }));
}

Protocol star_path_mixed_protocol(int k1, int k2, int n) {
  const auto dict = BooleanFunction::dictator(n, 1);
  const auto maj = last_three_majority(n);
  std::map<int, BooleanFunction> fns;
  fns.emplace(0, dict);
  for (int i = 1; i <= k1; ++i) fns.emplace(i, maj);
  for (int j = 1; j <= k2; ++j) fns.emplace(k1 + j, dict);
  return Protocol(std::move(fns));
}

CounterexampleReport counterexample_search(CorrelationParam rho, int n, int k1_min, int k1_max,
                                           int k2_min, int k2_max, const FunctionFamily& family,
                                           int jobs) {
  require(n >= 4, ErrorCode::DomainError, "the mixed protocol needs n >= 4");
  require(0 <= k1_min && k1_min <= k1_max && 0 <= k2_min && k2_min <= k2_max, ErrorCode::MalformedInput,
          "invalid k1/k2 ranges");
  const auto candidates = enumerate_family(family, n);
  const auto mixed = star_path_success_table(rho, BooleanFunction::dictator(n, 1), last_three_majority(n),
                                             k1_max, k2_max);
  const std::size_t cells = mixed.size();

  // Per chunk: best value and candidate index per cell. Exact comparisons with
  // ties to the lower index keep the merge independent of the chunking.
  const std::size_t chunks = detail::chunk_count(candidates.size(), jobs);
  std::vector<std::vector<double>> best(chunks, std::vector<double>(cells, -1.0));
  std::vector<std::vector<std::uint32_t>> arg(chunks, std::vector<std::uint32_t>(cells, 0));
  detail::for_each_chunk(candidates.size(), jobs, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& bv = best[chunk];
    auto& ba = arg[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      const auto t = star_path_success_table(rho, candidates[i], candidates[i], k1_max, k2_max);
      for (std::size_t c = 0; c < cells; ++c) {
        if (t[c] > bv[c]) {
          bv[c] = t[c];
          ba[c] = static_cast<std::uint32_t>(i);
        }
      }
    }
  });
  for (std::size_t chunk = 1; chunk < chunks; ++chunk) {
    for (std::size_t c = 0; c < cells; ++c) {
      if (best[chunk][c] > best[0][c]) {
        best[0][c] = best[chunk][c];
        arg[0][c] = arg[chunk][c];
      }
    }
  }

  CounterexampleReport report{rho.rho(), n, k1_min, k1_max, k2_min, k2_max, candidates.size(), {}};
  const std::size_t cols = static_cast<std::size_t>(k2_max) + 1;
  for (int k1 = k1_min; k1 <= k1_max; ++k1) {
    for (int k2 = k2_min; k2 <= k2_max; ++k2) {
      const std::size_t c = static_cast<std::size_t>(k1) * cols + k2;
      if (mixed[c] > best[0][c] * (1.0 + 1e-12)) {
        report.entries.push_back({k1, k2, mixed[c], best[0][c], candidates[arg[0][c]].encoding()});
      }
    }
  }
  return report;
}

}  // namespace nicd
