#include <doctest.h>

#include "nicd/boolean.hpp"

using namespace nicd;

TEST_CASE("encodings") {
  const auto d = BooleanFunction::parse("dict:2", 3);
  for (CubeIndex x = 0; x < 8; ++x) CHECK(d(x) == coordinate(x, 1));
  CHECK(d.encoding() == "dict:2");

  const auto m = BooleanFunction::parse("maj:3", 4);
  for (CubeIndex x = 0; x < 16; ++x) {
    const int s = coordinate(x, 0) + coordinate(x, 1) + coordinate(x, 2);
    CHECK(m(x) == (s > 0 ? 1 : -1));
  }

  const auto p = BooleanFunction::parse("parity:1,3", 3);
  for (CubeIndex x = 0; x < 8; ++x) CHECK(p(x) == coordinate(x, 0) * coordinate(x, 2));

  const auto t = BooleanFunction::parse("tt:1010", 2);
  CHECK(t(0) == 1);
  CHECK(t(1) == -1);
  CHECK(t == BooleanFunction::dictator(2, 1));
  CHECK(t.truth_table() == "1010");
}

TEST_CASE("encoding errors") {
  CHECK_THROWS_AS(BooleanFunction::parse("maj:2", 3), NicdError);
  CHECK_THROWS_AS(BooleanFunction::parse("dict:4", 3), NicdError);
  CHECK_THROWS_AS(BooleanFunction::parse("dict:0", 3), NicdError);
  CHECK_THROWS_AS(BooleanFunction::parse("foo:1", 3), NicdError);
  CHECK_THROWS_AS(BooleanFunction::parse("tt:10x0", 2), NicdError);
  try {
    BooleanFunction::parse("tt:10", 2);
    FAIL("arity mismatch accepted");
  } catch (const NicdError& e) {
    CHECK(e.code() == ErrorCode::ArityMismatch);
  }
  CHECK_THROWS_AS(BooleanFunction(CubeFunction(1, {0.5, -1.0})), NicdError);
}

TEST_CASE("predicates") {
  const auto d = BooleanFunction::dictator(3, 1);
  CHECK(d.is_balanced());
  CHECK(d.is_antisymmetric());
  CHECK(d.is_monotone());
  CHECK(d.negated().is_balanced());
  CHECK_FALSE(d.negated().is_monotone());
  CHECK(BooleanFunction::majority(5, 5).is_monotone());
  CHECK(BooleanFunction::majority(5, 3).is_antisymmetric());

  const auto par = BooleanFunction::parity(3, {1, 2});
  CHECK(par.is_balanced());
  CHECK_FALSE(par.is_antisymmetric());
  CHECK_FALSE(par.is_monotone());
  CHECK(par.is_monotone_in(2));
  CHECK_FALSE(par.is_monotone_in(0));

  const auto and2 = BooleanFunction::from_truth_table("1000");
  CHECK_FALSE(and2.is_balanced());
  CHECK(and2.is_monotone());
}

TEST_CASE("indicator") {
  const auto d = BooleanFunction::dictator(2, 2);
  const auto up = d.indicator(1);
  const auto down = d.indicator(-1);
  for (CubeIndex x = 0; x < 4; ++x) {
    CHECK(up[x] + down[x] == 1.0);
    CHECK(up[x] == (coordinate(x, 1) == 1 ? 1.0 : 0.0));
  }
}
