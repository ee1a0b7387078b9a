#include "psmm/cohomology.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psmm;
using psmm::testing::rand_int;

namespace {

// Betti numbers from ranks of coboundaries alone.
std::vector<std::size_t> betti_by_rank(const SimplicialComplex& k, int max_deg) {
  const auto delta = coboundaries(k, max_deg);
  std::vector<std::size_t> out;
  for (int d = 0; d <= max_deg; ++d) {
    const std::size_t r_out = rank(delta[d]);
    const std::size_t r_in = d == 0 ? 0 : rank(delta[d - 1]);
    out.push_back(k.count(d) - r_out - r_in);
  }
  return out;
}

RatVector random_cochain(std::mt19937& rng, std::size_t n) {
  RatVector v(n);
  for (auto& x : v) x = rand_int(rng, -2, 2);
  return v;
}

SimplicialComplex triangle_boundary(int offset, int vertices) {
  return SimplicialComplex::from_facets(vertices, {{offset, offset + 1}, {offset + 1, offset + 2}, {offset, offset + 2}});
}

}  // namespace

TEST_CASE("torus cohomology ring") {
  const auto torus = SimplicialComplex::from_facets(7, testing::torus7_facets());
  REQUIRE(torus.count(0) == 7);
  REQUIRE(torus.count(1) == 21);
  REQUIRE(torus.count(2) == 14);
  const CohomologyRing r = cohomology_ring(torus, 2);
  CHECK(r.dims == std::vector<std::size_t>{1, 2, 1});
  CHECK(betti_by_rank(torus, 2) == r.dims);
  CHECK_FALSE(is_zero(r.product(1, 0, 1, 1)));
  CHECK(r.product(1, 0, 1, 1) == RatVector{-r.product(1, 1, 1, 0)[0]});
  CHECK(is_zero(r.product(1, 0, 1, 0)));
  CHECK(is_graded_commutative(r));
  CHECK(is_associative(r));
  CHECK(unit_acts_trivially(r));
}

TEST_CASE("octahedron is a two-sphere") {
  const auto oct = SimplicialComplex::from_facets(6, testing::octahedron_facets());
  const CohomologyRing r = cohomology_ring(oct, 2);
  CHECK(r.dims == std::vector<std::size_t>{1, 0, 1});
  CHECK(betti_by_rank(oct, 2) == r.dims);
}

TEST_CASE("wedge reduction keeps positive degrees") {
  SimplicialComplex two = SimplicialComplex::from_facets(
      6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const CohomologyRing r = cohomology_ring(two, 1);
  CHECK(r.dims == std::vector<std::size_t>{2, 2});
  const CohomologyRing w = wedge_reduction(r);
  CHECK(w.dims == std::vector<std::size_t>{1, 2});
  CHECK(w.unit == RatVector{Rational(1)});
  CHECK(unit_acts_trivially(w));
  CHECK(is_graded_commutative(w));
}

TEST_CASE("coboundary squares to zero and cup product is Leibniz") {
  const auto torus = SimplicialComplex::from_facets(7, testing::torus7_facets());
  const auto delta = coboundaries(torus, 2);
  CHECK((delta[1] * delta[0]).is_zero());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RatVector a = random_cochain(rng, torus.count(0));
    const RatVector b = random_cochain(rng, torus.count(1));
    // d(a b) = da b + a db for a of degree 0
    const RatVector lhs = delta[1].apply(cup_product(torus, 0, a, 1, b));
    RatVector rhs = cup_product(torus, 1, delta[0].apply(a), 1, b);
    const RatVector second = cup_product(torus, 0, a, 2, delta[1].apply(b));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += second[i];
    CHECK(lhs == rhs);
    const SparseCochain sa = to_sparse(a), sb = to_sparse(b);
    CHECK(to_dense(cup_product(torus, 0, sa, 1, sb), torus.count(1)) == cup_product(torus, 0, a, 1, b));
  }
}

TEST_CASE("restriction to the one-skeleton is injective and multiplicative") {
  const auto torus = SimplicialComplex::from_facets(7, testing::torus7_facets());
  std::vector<Simplex> edges = torus.simplices(1);
  const auto skeleton = SimplicialComplex::from_facets(7, edges);
  const ComplexCohomology big(torus, 2), small(skeleton, 2);
  CHECK(small.ring().dims == std::vector<std::size_t>{1, 15, 0});
  const auto f = induced_ring_map(big, small);
  REQUIRE(f.size() == 3);
  CHECK(rank(f[0]) == 1);
  CHECK(rank(f[1]) == 2);
  CHECK(f[2].rows() == 0);
  CHECK(is_multiplicative(f, big.ring(), small.ring()));
}

TEST_CASE("coordinates reject non-cocycles") {
  const auto circle = triangle_boundary(0, 3);
  const ComplexCohomology c(circle, 1);
  CHECK(c.ring().dims == std::vector<std::size_t>{1, 1});
  SparseCochain vertex{{0, Rational(1)}};
  CHECK_THROWS_AS(c.coordinates(0, vertex), std::logic_error);
  SparseCochain edge{{0, Rational(1)}};
  CHECK(c.coordinates(1, edge).size() == 1);
  CHECK(sgn(c.coordinates(1, edge)[0]) != 0);
}

TEST_CASE("random flag complexes satisfy ring axioms") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = rand_int(rng, 4, 7);
    std::vector<Simplex> facets;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          if (rand_int(rng, 0, 3) == 0) facets.push_back({i, j, k});
    for (int i = 0; i < n; ++i) facets.push_back({i});
    const auto cx = SimplicialComplex::from_facets(n, facets);
    const CohomologyRing r = cohomology_ring(cx, 2);
    CHECK(betti_by_rank(cx, 2) == r.dims);
    CHECK(is_graded_commutative(r));
    CHECK(is_associative(r));
    CHECK(unit_acts_trivially(r));
  }
}
