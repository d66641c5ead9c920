#include "nicd/boolean.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

namespace nicd {

namespace {

int parse_int(std::string_view s, std::string_view context) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  require(ec == std::errc() && ptr == end && !s.empty(), ErrorCode::MalformedInput,
          "bad integer '" + std::string(s) + "' in " + std::string(context));
  return v;
}

void check_coord(int n, int coord) {
  require(coord >= 1 && coord <= n, ErrorCode::MalformedInput,
          "coordinate " + std::to_string(coord) + " outside 1.." + std::to_string(n));
}

}  // namespace

BooleanFunction::BooleanFunction(CubeFunction table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
  require(table_.is_boolean(), ErrorCode::MalformedInput, "Boolean function must take values +-1");
}

BooleanFunction BooleanFunction::dictator(int n, int coord) {
  CubeFunction::check_dimension(n);
  check_coord(n, coord);
  return BooleanFunction(
      CubeFunction::tabulate(n, [&](CubeIndex x) { return double(coordinate(x, coord - 1)); }),
      "dict:" + std::to_string(coord));
}

BooleanFunction BooleanFunction::majority(int n, int r) {
  CubeFunction::check_dimension(n);
  require(r >= 1 && r <= n && r % 2 == 1, ErrorCode::MalformedInput,
          "majority needs odd r in 1..n, got " + std::to_string(r));
  return BooleanFunction(CubeFunction::tabulate(n,
                                                [&](CubeIndex x) {
                                                  int s = 0;
                                                  for (int j = 0; j < r; ++j) s += coordinate(x, j);
                                                  return s > 0 ? 1.0 : -1.0;
                                                }),
                         "maj:" + std::to_string(r));
}

BooleanFunction BooleanFunction::parity(int n, const std::vector<int>& coords) {
  CubeFunction::check_dimension(n);
  require(!coords.empty(), ErrorCode::MalformedInput, "parity needs at least one coordinate");
  CubeIndex mask = 0;
  std::string name = "parity:";
  for (std::size_t k = 0; k < coords.size(); ++k) {
    check_coord(n, coords[k]);
    require(!(mask >> (coords[k] - 1) & 1u), ErrorCode::MalformedInput, "repeated parity coordinate");
    mask |= CubeIndex{1} << (coords[k] - 1);
    name += (k ? "," : "") + std::to_string(coords[k]);
  }
  return BooleanFunction(
      CubeFunction::tabulate(n, [&](CubeIndex x) { return level(x & mask) % 2 ? -1.0 : 1.0; }),
      std::move(name));
}

BooleanFunction BooleanFunction::from_truth_table(std::string_view bits) {
  const auto len = bits.size();
  require(len >= 2 && (len & (len - 1)) == 0, ErrorCode::MalformedInput,
          "truth table length " + std::to_string(len) + " is not a power of two >= 2");
  const int n = std::countr_zero(len);
  CubeFunction::check_dimension(n);
  std::vector<double> v(len);
  for (std::size_t i = 0; i < len; ++i) {
    require(bits[i] == '0' || bits[i] == '1', ErrorCode::MalformedInput, "truth table must be 0/1");
    v[i] = bits[i] == '1' ? 1.0 : -1.0;
  }
  return BooleanFunction(CubeFunction(n, std::move(v)));
}

BooleanFunction BooleanFunction::parse(std::string_view encoding, int n) {
  const auto colon = encoding.find(':');
  require(colon != std::string_view::npos, ErrorCode::MalformedInput,
          "function encoding '" + std::string(encoding) + "' lacks a kind prefix");
  const auto kind = encoding.substr(0, colon);
  const auto body = encoding.substr(colon + 1);
  if (kind == "dict") return dictator(n, parse_int(body, encoding));
  if (kind == "maj") return majority(n, parse_int(body, encoding));
  if (kind == "parity") {
    std::vector<int> coords;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const auto comma = std::min(body.find(',', pos), body.size());
      coords.push_back(parse_int(body.substr(pos, comma - pos), encoding));
      pos = comma + 1;
    }
    return parity(n, coords);
  }
  if (kind == "tt") {
    auto f = from_truth_table(body);
    require(f.n() == n, ErrorCode::ArityMismatch,
            "truth table has " + std::to_string(f.n()) + " inputs, expected " + std::to_string(n));
    return f;
  }
  throw NicdError(ErrorCode::MalformedInput, "unknown function kind '" + std::string(kind) + "'");
}

std::string BooleanFunction::truth_table() const {
  std::string s(size(), '0');
  for (CubeIndex i = 0; i < size(); ++i) {
    if ((*this)(i) == 1) s[i] = '1';
  }
  return s;
}

std::string BooleanFunction::encoding() const {
  return name_.empty() ? "tt:" + truth_table() : name_;
}

bool BooleanFunction::is_balanced() const {
  std::size_t plus = 0;
  for (CubeIndex i = 0; i < size(); ++i) plus += (*this)(i) == 1;
  return 2 * plus == size();
}

bool BooleanFunction::is_antisymmetric() const {
  const CubeIndex all = static_cast<CubeIndex>(size() - 1);
  for (CubeIndex i = 0; i < size(); ++i) {
    if ((*this)(i) != -(*this)(i ^ all)) return false;
  }
  return true;
}

bool BooleanFunction::is_monotone_in(int coord) const {
  const CubeIndex bit = CubeIndex{1} << coord;
  // Setting the bit moves x_coord from +1 down to -1.
  for (CubeIndex i = 0; i < size(); ++i) {
    if (!(i & bit) && (*this)(i) < (*this)(i | bit)) return false;
  }
  return true;
}

bool BooleanFunction::is_monotone() const {
  for (int j = 0; j < n(); ++j) {
    if (!is_monotone_in(j)) return false;
  }
  return true;
}

CubeFunction BooleanFunction::indicator(int b) const {
  return CubeFunction::tabulate(n(), [&](CubeIndex x) { return (*this)(x) == b ? 1.0 : 0.0; });
}

BooleanFunction BooleanFunction::negated() const {
  return BooleanFunction(CubeFunction::tabulate(n(), [&](CubeIndex x) { return -table_[x]; }));
}

}  // namespace nicd
