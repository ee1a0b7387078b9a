#include "psmm/ratlin.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psmm;
using psmm::testing::frac;

namespace {

RatMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> sparse(0, 2);
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (sparse(rng) != 0) m(i, j) = frac(entry(rng), 1 + sparse(rng));
  return m;
}

}  // namespace

TEST_CASE("rref of small matrices") {
  auto id = rref(RatMatrix::identity(2));
  CHECK(id.reduced == RatMatrix::identity(2));
  CHECK(id.pivot_columns == std::vector<std::size_t>{0, 1});
  CHECK(id.rank == 2);

  auto r = rref(RatMatrix{{1, 2}, {2, 4}});
  CHECK(r.reduced == RatMatrix{{1, 2}, {0, 0}});
  CHECK(r.pivot_columns == std::vector<std::size_t>{0});
  CHECK(r.rank == 1);

  auto z = rref(RatMatrix(3, 3));
  CHECK(z.reduced.is_zero());
  CHECK(z.pivot_columns.empty());
  CHECK(z.rank == 0);
}

TEST_CASE("solve returns exact solutions or nothing") {
  RatVector b{frac(5, 3), Rational(-2)};
  CHECK(*solve(RatMatrix::identity(2), b) == b);

  RatMatrix a{{1, 1}};
  auto x = solve(a, {Rational(3)});
  REQUIRE(x);
  CHECK(a.apply(*x) == RatVector{Rational(3)});

  CHECK_FALSE(solve(RatMatrix{{1}, {0}}, {Rational(0), Rational(1)}));
  CHECK_THROWS_AS(solve(RatMatrix{{1}, {0}}, {Rational(0)}), DimensionError);
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(RatMatrix::identity(3)).cols() == 0);
  RatMatrix k = kernel_basis(RatMatrix{{1, 2}});
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == -2 * k(1, 0));
  CHECK(kernel_basis(RatMatrix(1, 3)).cols() == 3);
}

TEST_CASE("quotient bases") {
  const RatMatrix none(3, 0);
  CHECK(quotient_basis(3, none, RatMatrix::identity(3)) == std::vector<std::size_t>{0, 1, 2});
  RatMatrix e1(3, 1);
  e1(0, 0) = 1;
  RatMatrix v(3, 2);
  v(0, 0) = 1;
  v(1, 1) = 1;
  CHECK(quotient_basis(3, e1, v) == std::vector<std::size_t>{1});
  CHECK(quotient_basis(3, RatMatrix::identity(3), v).empty());
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("2/4") == frac(1, 2));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(format_rational(frac(-6, 4)) == "-3/2");
  CHECK(format_rational(Rational(7)) == "7");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("span solver expresses vectors in redundant generators") {
  std::vector<RatVector> gens{{1, 0, 1}, {2, 0, 2}, {0, 1, 0}};
  SpanSolver s(3, gens);
  CHECK(s.rank() == 2);
  auto c = s.express({3, -1, 3});
  REQUIRE(c);
  RatVector sum(3);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) sum[j] += (*c)[i] * gens[i][j];
  CHECK(sum == RatVector{3, -1, 3});
  CHECK_FALSE(s.express({1, 0, 0}));
}

TEST_CASE("random matrix properties") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 5;
    const std::size_t c = 1 + rng() % 6;
    const RatMatrix a = random_matrix(rng, r, c);
    const RrefResult red = rref(a);
    const RatMatrix k = kernel_basis(a);
    INFO("trial " << trial);
    CHECK(red.rank + k.cols() == c);
    CHECK((a * k).is_zero());
    CHECK(rank(k) == k.cols());
    CHECK(rref(red.reduced).reduced == red.reduced);
    CHECK(rank(a.transposed()) == red.rank);

    RatVector x(c);
    for (auto& v : x) v = frac(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3);
    const RatVector b = a.apply(x);
    auto sol = solve(a, b);
    REQUIRE(sol);
    CHECK(a.apply(*sol) == b);

    EchelonBasis eb(r);
    for (const auto& col : a.columns()) eb.insert(col);
    CHECK(eb.size() == red.rank);
    for (const auto& col : a.columns()) CHECK(eb.contains(col));
  }
}
