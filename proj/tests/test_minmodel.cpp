#include "psmm/io.hpp"
#include "psmm/minmodel.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psmm;

namespace {

std::vector<std::size_t> generator_counts(const SullivanAlgebra& alg, int max_deg) {
  std::vector<std::size_t> out(max_deg + 1, 0);
  for (const auto& g : alg.generators())
    if (g.degree <= max_deg) ++out[g.degree];
  return out;
}

CohomologyRing ring_from(const std::string& text) { return load_algebra(json::parse(text)).ring; }

CohomologyRing data_ring(const std::string& name) {
  return load_algebra(read_json_file(std::string(PSMM_DATA_DIR) + "/" + name)).ring;
}

std::vector<RatMatrix> identity_on(const FiniteCdga& a) {
  std::vector<RatMatrix> f;
  for (int k = 0; k <= a.top; ++k) f.push_back(RatMatrix::identity(a.dim(k)));
  return f;
}

}  // namespace

TEST_CASE("two-sphere model") {
  const MinimalModel mm = minimal_model(ring_with_top(data_ring("s2_ring.json"), 8), 6);
  const SullivanAlgebra& m = *mm.model;
  REQUIRE(m.generator_count() == 2);
  CHECK(m.generators()[0].degree == 2);
  CHECK(m.generators()[1].degree == 3);
  Monomial a2{2};
  CHECK(m.differential(1) == Polynomial{{a2, Rational(1)}});
  CHECK(is_minimal(m));
  CHECK(differential_is_decomposable(m));
  CHECK(mm.verified_degree() >= 6);
  CHECK(verify_quasi_iso(mm, 6).verified_degree == 6);
  CHECK_FALSE(mm.h1_nonzero);
}

TEST_CASE("deleting a generator is caught by the quasi-isomorphism check") {
  const MinimalModel mm = minimal_model(data_ring("s2_ring.json"), 5);
  MinimalModel broken = mm;
  broken.model = std::make_shared<const SullivanAlgebra>(SullivanAlgebra::make({{"a", 2}}, {}, mm.model->truncation()));
  broken.rho.resize(1);
  const QuasiIsoReport r = verify_quasi_iso(broken, 6);
  CHECK(r.verified_degree == 3);
  CHECK(r.model_dims[4] == 1);
  CHECK(r.input_dims[4] == 0);
}

TEST_CASE("odd sphere and trivial input") {
  const MinimalModel s3 =
      minimal_model(ring_from(R"({"classes":[{"name":"c","degree":3}],"products":[],"max_degree":6})"), 5);
  CHECK(generator_counts(*s3.model, 5) == std::vector<std::size_t>{0, 0, 0, 1, 0, 0});
  CHECK(is_zero(s3.model->differential(0)));

  const MinimalModel point = minimal_model(ring_from(R"({"classes":[],"products":[],"max_degree":4})"), 3);
  CHECK(point.model->generator_count() == 0);
  const QuasiIsoReport r = verify_quasi_iso(point, 3);
  CHECK(r.verified_degree == 3);
  CHECK(r.ranks == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("models of Sullivan inputs") {
  const auto nonminimal = load_algebra(read_json_file(std::string(PSMM_DATA_DIR) + "/nonminimal.json"));
  CHECK_FALSE(is_minimal(nonminimal.sullivan));
  const MinimalModel mr = minimal_model(nonminimal.sullivan, 5);
  CHECK(mr.model->generator_count() == 0);

  const auto k2k3 = load_algebra(read_json_file(std::string(PSMM_DATA_DIR) + "/k2k3.json"));
  const MinimalModel mk = minimal_model(k2k3.sullivan, 5);
  CHECK(generator_counts(*mk.model, 5) == std::vector<std::size_t>{0, 0, 1, 1, 0, 0});
  CHECK(is_minimal(*mk.model));
  CHECK(mk.verified_degree() >= 5);
}

TEST_CASE("torus ring has a converged degree-one model") {
  const auto torus = SimplicialComplex::from_facets(7, testing::torus7_facets());
  const CohomologyRing r = ring_with_top(cohomology_ring(torus, 2), 4);
  const MinimalModel mm = minimal_model(r, 3);
  CHECK(mm.h1_nonzero);
  CHECK(mm.deg1_converged);
  CHECK(mm.deg1_iterations == 0);
  CHECK(generator_counts(*mm.model, 3) == std::vector<std::size_t>{0, 2, 0, 0});
  CHECK(is_minimal(*mm.model));
  CHECK(mm.verified_degree() >= 3);
}

TEST_CASE("figure-eight ring does not converge in degree one") {
  const CohomologyRing r = ring_from(
      R"({"classes":[{"name":"a","degree":1},{"name":"b","degree":1}],"products":[],"max_degree":4})");
  ModelOptions opts;
  opts.deg1_cap = 3;
  const MinimalModel mm = minimal_model(r, 3, opts);
  CHECK(mm.h1_nonzero);
  CHECK_FALSE(mm.deg1_converged);
  CHECK(is_minimal(*mm.model));
  CHECK(generator_counts(*mm.model, 1)[1] > 2);
}

TEST_CASE("generator order does not change the shape of the model") {
  const char* forward =
      R"({"classes":[{"name":"x","degree":2},{"name":"y","degree":2},{"name":"z","degree":4}],
          "products":[{"left":"x","right":"y","result":[{"coeff":"1","class":"z"}]}],"max_degree":6})";
  const char* backward =
      R"({"classes":[{"name":"z","degree":4},{"name":"y","degree":2},{"name":"x","degree":2}],
          "products":[{"left":"y","right":"x","result":[{"coeff":"1","class":"z"}]}],"max_degree":6})";
  const MinimalModel a = minimal_model(ring_from(forward), 5);
  const MinimalModel b = minimal_model(ring_from(backward), 5);
  CHECK(generator_counts(*a.model, 5) == generator_counts(*b.model, 5));
  CHECK(a.verified_degree() >= 5);
  CHECK(b.verified_degree() >= 5);
}

TEST_CASE("representatives of identity and zero maps") {
  const MinimalModel mm = minimal_model(data_ring("s2_ring.json"), 5);
  const auto id = identity_on(*mm.input);
  const CdgaMorphism phi = sullivan_representative(id, mm, mm, 5);
  REQUIRE_NOTHROW(validate_morphism(phi));
  CHECK(representative_contract_holds(phi, id, mm, mm, 5));
  for (const auto& q : linear_part_map(phi)) CHECK(q == RatMatrix::identity(q.rows()));
  for (const auto& h : cohomology_map(phi, 5)) CHECK(h == RatMatrix::identity(h.rows()));

  std::vector<RatMatrix> zero;
  for (int k = 0; k <= mm.input->top; ++k) zero.push_back(RatMatrix(mm.input->dim(k), mm.input->dim(k)));
  zero[0] = RatMatrix::identity(1);
  const CdgaMorphism psi = sullivan_representative(zero, mm, mm, 5);
  REQUIRE_NOTHROW(validate_morphism(psi));
  CHECK(representative_contract_holds(psi, zero, mm, mm, 5));
  for (const auto& q : linear_part_map(psi)) CHECK(q.is_zero());
  // composites agree at the level of Q and H
  const CdgaMorphism comp = compose(psi, phi);
  const auto qc = linear_part_map(comp), qp = linear_part_map(psi), qi = linear_part_map(phi);
  for (std::size_t k = 0; k < qc.size(); ++k) CHECK(qc[k] == qp[k] * qi[k]);
}

TEST_CASE("models of random Sullivan algebras") {
  std::mt19937 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const SullivanAlgebra alg = testing::random_sullivan(rng, 4, 3, 8);
    ModelOptions opts;
    opts.deg1_cap = 3;
    const MinimalModel mm = minimal_model(alg, 4, opts);
    INFO("trial " << trial << ": " << alg.generator_count() << " generators");
    CHECK(is_minimal(*mm.model));
    CHECK(differential_is_decomposable(*mm.model));
    if (!mm.deg1_converged || !mm.complete) continue;
    ++checked;
    CHECK(mm.verified_degree() >= 4);
    const auto h = cdga_cohomology(alg, 4).space.dims;
    const auto hm = cdga_cohomology(*mm.model, 4).space.dims;
    CHECK(h == hm);
  }
  CHECK(checked > 10);
}
