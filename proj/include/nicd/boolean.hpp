#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nicd/cube.hpp"

namespace nicd {

/// A {-1,+1}-valued cube function with an optional textual name.
///
/// Accepted encodings (coordinates are 1-based):
///   dict:j            f(x) = x_j
///   maj:r             majority of x_1..x_r, r odd
///   parity:j1,j2,...  product of the listed coordinates
///   tt:<bits>         character i is '1' iff f(x(i)) = +1
class BooleanFunction {
 public:
  explicit BooleanFunction(CubeFunction table, std::string name = {});

  static BooleanFunction dictator(int n, int coord);
  static BooleanFunction majority(int n, int r);
  static BooleanFunction parity(int n, const std::vector<int>& coords);
  static BooleanFunction from_truth_table(std::string_view bits);
  static BooleanFunction parse(std::string_view encoding, int n);

  int n() const { return table_.n(); }
  std::size_t size() const { return table_.size(); }
  int operator()(CubeIndex x) const { return table_[x] > 0.0 ? 1 : -1; }
  const CubeFunction& table() const { return table_; }

  /// Bitstring of length 2^n, '1' where the function is +1.
  std::string truth_table() const;
  /// The name it was built from, else "tt:<bits>".
  std::string encoding() const;

  bool is_balanced() const;
  bool is_antisymmetric() const;
  bool is_monotone() const;
  /// Nondecreasing in coordinate `coord` (0-based).
  bool is_monotone_in(int coord) const;

  /// Zero-one indicator of {x : f(x) = b}.
  CubeFunction indicator(int b) const;
  BooleanFunction negated() const;

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.n() == b.n() && std::equal(a.table_.values().begin(), a.table_.values().end(),
                                        b.table_.values().begin());
  }

 private:
  CubeFunction table_;
  std::string name_;
};

}  // namespace nicd
