#include "psmm/io.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace psmm;

namespace {

std::string data(const std::string& name) { return std::string(PSMM_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("numbers and matrices") {
  CHECK(number_json(kInf) == "inf");
  CHECK(std::isinf(number_from_json("inf")));
  CHECK(number_from_json("1/4") == 0.25);
  CHECK(number_from_json(1.5) == 1.5);
  const RatMatrix m{{1, -2}, {0, 3}};
  CHECK(matrix_from_json(matrix_json(m), 2, 2) == m);
  CHECK_THROWS_AS(matrix_from_json(matrix_json(m), 3, 2), InputError);
}

TEST_CASE("polynomials round trip") {
  const auto alg = load_algebra(read_json_file(data("s2_model.json"))).sullivan;
  const Polynomial p = alg.multiply(alg.generator_poly(0), alg.generator_poly(1));
  CHECK(polynomial_from_json(alg, polynomial_json(alg, p)) == p);
  CHECK_THROWS_AS(polynomial_from_json(alg, json::parse(R"([{"coeff":"1","monomial":["nope"]}])")), InputError);
}

TEST_CASE("ring files are validated") {
  CHECK_THROWS_AS(load_algebra(json::parse(R"({"classes":[{"name":"a","degree":0}],"products":[],"max_degree":4})")),
                  InputError);
  CHECK_THROWS_AS(load_algebra(json::parse(
                      R"({"classes":[{"name":"a","degree":1},{"name":"b","degree":1},{"name":"c","degree":2}],
                          "products":[{"left":"a","right":"b","result":[{"coeff":"1","class":"c"}]},
                                      {"left":"b","right":"a","result":[{"coeff":"1","class":"c"}]}],
                          "max_degree":4})")),
                  InputError);
  CHECK_THROWS_AS(load_algebra(json::parse(R"({"classes":[{"name":"a","degree":2}],
      "products":[{"left":"a","right":"a","result":[{"coeff":"1","class":"zz"}]}],"max_degree":4})")),
                  InputError);
  const auto ok = load_algebra(json::parse(
      R"({"classes":[{"name":"a","degree":1},{"name":"b","degree":1},{"name":"c","degree":2}],
          "products":[{"left":"a","right":"b","result":[{"coeff":"1","class":"c"}]}],"max_degree":4})"));
  CHECK(ok.kind == AlgebraFile::Kind::ring);
  CHECK(is_graded_commutative(ok.ring));
  CHECK(ok.ring.product(1, 1, 1, 0) == RatVector{Rational(-1)});
}

TEST_CASE("persistent CDGA files are validated") {
  const json mismatch = {{"grid", {1}}, {"stages", {"s2_ring.json", "k2k3.json"}}, {"maps", {"identity"}}};
  CHECK_THROWS_AS(load_persistent_cdga(mismatch, PSMM_DATA_DIR, 4), InputError);
  const json short_maps = {{"grid", {1, 2}}, {"stages", {"s2_ring.json", "s2_ring.json", "s2_ring.json"}},
                           {"maps", {"identity"}}};
  CHECK_THROWS_AS(load_persistent_cdga(short_maps, PSMM_DATA_DIR, 4), InputError);
  const json missing = {{"grid", {1}}, {"stages", {"absent.json", "absent.json"}}, {"maps", {"identity"}}};
  CHECK_THROWS_AS(load_persistent_cdga(missing, PSMM_DATA_DIR, 4), InputError);
  // sending the generator to zero is multiplicative since a^2 = 0
  const json zero = {{"grid", {1}},
                     {"stages", {"s2_ring.json", "s2_ring.json"}},
                     {"maps", {{{"images", {{"a", json::array()}}}}}}};
  const PersistentCdga pc = load_persistent_cdga(zero, PSMM_DATA_DIR, 4);
  REQUIRE(pc.maps.size() == 1);
  CHECK(pc.maps[0][2].is_zero());
  CHECK_THROWS_AS(read_json_file(data("absent.json")), InputError);
}

TEST_CASE("barcodes round trip") {
  Barcode b;
  b.bars[0] = {{0, kInf, 1}, {0, 1, 3}};
  b.bars[2] = {{0.5, 2.25, 2}};
  const json j = barcode_json(b, 3, "H");
  CHECK(j["invariant"] == "H");
  const Barcode back = barcode_from_json(j);
  CHECK(barcode_json(back, 3, "H").dump() == j.dump());
}

TEST_CASE("model dumps reproduce the barcodes") {
  PipelineOptions opts;
  opts.max_degree = 3;
  for (const char* name : {"square.json", "circle20.json", "two_points.json"}) {
    INFO(name);
    const auto psm = persistent_model(load_metric_file(data(name)), opts);
    const json dump = model_json(psm);
    CHECK(is_model_dump(dump));
    const auto back = model_from_json(json::parse(dump.dump()));
    CHECK(barcode_json(v_barcode(back), 3, "V").dump() == barcode_json(v_barcode(psm), 3, "V").dump());
    CHECK(barcode_json(h_barcode(back), 3, "H").dump() == barcode_json(h_barcode(psm), 3, "H").dump());
    CHECK(model_json(back).dump() == dump.dump());
  }
  CHECK_FALSE(is_model_dump(read_json_file(data("square.json"))));
  json broken = model_json(persistent_model(load_metric_file(data("square.json")), opts));
  broken["stages"][0]["h_dims"] = json::array({1});
  CHECK_THROWS_AS(model_from_json(broken), InputError);
}

TEST_CASE("reports") {
  PipelineOptions opts;
  opts.max_degree = 2;
  const BoundsReport r =
      bounds_report(load_metric_file(data("square.json")), load_metric_file(data("square2.json")), opts, true);
  const json j = report_json(r);
  CHECK(j.contains("bracket"));
  CHECK(report_table(r).find("dB_H") != std::string::npos);
}
