#include "psmm/io.hpp"
#include "psmm/pipeline.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psmm;
using psmm::testing::rand_int;

namespace {

std::string data(const std::string& name) { return std::string(PSMM_DATA_DIR) + "/" + name; }

MetricSpace random_metric(std::mt19937& rng, std::size_t n) {
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = testing::frac(rand_int(rng, 1, 9), 4);
  return make_metric_exact(d);
}

std::vector<Bar> bars_of(const Barcode& b, int degree) {
  auto it = b.bars.find(degree);
  return it == b.bars.end() ? std::vector<Bar>{} : it->second;
}

bool close_bars(const Barcode& a, const Barcode& b, double scale = 1) {
  std::set<int> degrees;
  for (const auto& [k, v] : a.bars)
    if (!v.empty()) degrees.insert(k);
  for (const auto& [k, v] : b.bars)
    if (!v.empty()) degrees.insert(k);
  for (int k : degrees) {
    const auto x = bars_of(a, k), y = bars_of(b, k);
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].mult != y[i].mult) return false;
      if (std::abs(scale * x[i].birth - y[i].birth) > 1e-9) return false;
      if (std::isinf(x[i].death) != std::isinf(y[i].death)) return false;
      if (!std::isinf(x[i].death) && std::abs(scale * x[i].death - y[i].death) > 1e-9) return false;
    }
  }
  return true;
}

PersistentCdga constant_cdga(const std::string& stage_file, int max_degree) {
  json doc = {{"grid", {1, 2}},
              {"stages", {stage_file, stage_file, stage_file}},
              {"maps", {"identity", "identity"}}};
  return load_persistent_cdga(doc, PSMM_DATA_DIR, max_degree);
}

}  // namespace

TEST_CASE("cohomology barcodes agree with persistent homology") {
  PipelineOptions opts;
  opts.max_degree = 3;
  const MetricSpace circle = testing::circle_metric(20);
  const Barcode h = h_barcode(circle, opts);
  const Barcode oracle = testing::homology_barcode(build_filtration(circle, opts.skeleton_dim()), 3);
  CHECK(close_bars(h, oracle));
  REQUIRE(bars_of(h, 1).size() == 1);
  CHECK(bars_of(h, 1)[0].death == Catch::Approx(2 * M_PI * 7 / 20));

  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const MetricSpace m = random_metric(rng, rand_int(rng, 2, 6));
    PipelineOptions o;
    o.max_degree = 2;
    INFO("trial " << trial);
    CHECK(close_bars(h_barcode(m, o), testing::homology_barcode(build_filtration(m, 3), 2)));
  }
}

TEST_CASE("two points and the square") {
  PipelineOptions opts;
  opts.max_degree = 2;
  const auto two = persistent_model(load_metric_file(data("two_points.json")), opts);
  CHECK(bars_of(h_barcode(two), 0).size() == 2);
  CHECK(v_barcode(two).total(1) == 0);
  CHECK(v_barcode(two).total(2) == 0);
  CHECK(two.stages[0].wedge_reduced);

  const auto sq = persistent_model(load_metric_file(data("square.json")), opts);
  const Barcode v = v_barcode(sq), h = h_barcode(sq);
  REQUIRE(bars_of(v, 1).size() == 1);
  CHECK(bars_of(v, 1)[0].birth == 1);
  CHECK(bars_of(v, 1)[0].death == Catch::Approx(std::sqrt(2.0)));
  CHECK(close_bars(h, testing::homology_barcode(build_filtration(load_metric_file(data("square.json")), 3), 2)));
  CHECK(sq.any_h1_nonzero());
  CHECK(sq.all_converged());
  CHECK(sq.functorial);
}

TEST_CASE("barcodes scale with the metric") {
  PipelineOptions opts;
  opts.max_degree = 2;
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricSpace m = random_metric(rng, rand_int(rng, 3, 5));
    const auto a = persistent_model(m, opts);
    const auto b = persistent_model(scaled(m, 3), opts);
    INFO("trial " << trial);
    CHECK(close_bars(h_barcode(a), h_barcode(b), 3));
    CHECK(close_bars(v_barcode(a), v_barcode(b), 3));
  }
}

TEST_CASE("V and H agree in the lowest degree of simply connected stages") {
  PipelineOptions opts;
  opts.max_degree = 3;
  const auto psm = persistent_model(testing::circle_metric(20), opts);
  const PersistentGVec v = v_module(psm), h = h_module(psm);
  int checked = 0;
  for (std::size_t s = 0; s < psm.stages.size(); ++s) {
    const StageModel& st = psm.stages[s];
    if (st.h1_nonzero || st.wedge_reduced || !st.complete) continue;
    int lowest = -1;
    for (int k = 2; k <= 3 && lowest < 0; ++k)
      if (h.dim(s, k) > 0) lowest = k;
    for (int k = 2; k <= 3; ++k) {
      if (lowest < 0 || k < lowest) CHECK(v.dim(s, k) == 0);
      if (k == lowest) CHECK(v.dim(s, k) == h.dim(s, k));
    }
    ++checked;
  }
  CHECK(checked > 0);
  CHECK(psm.functorial);
}

TEST_CASE("quasi-isomorphic inputs give identical barcodes") {
  PipelineOptions opts;
  opts.max_degree = 4;
  const auto ring = persistent_model(constant_cdga("s2_ring.json", 4), opts);
  const auto sullivan = persistent_model(constant_cdga("s2_model.json", 4), opts);
  CHECK(v_barcode(ring) == v_barcode(sullivan));
  CHECK(h_barcode(ring) == h_barcode(sullivan));
  const BoundsReport r = bounds_report(ring, sullivan);
  CHECK(r.dB_H.sup == 0);
  CHECK(r.dB_V.sup == 0);
}

TEST_CASE("identical inputs are at distance zero") {
  PipelineOptions opts;
  opts.max_degree = 2;
  const MetricSpace sq = load_metric_file(data("square.json"));
  const BoundsReport r = bounds_report(sq, sq, opts, true);
  CHECK(r.dB_H.sup == 0);
  CHECK(r.dB_V.sup == 0);
  REQUIRE(r.gh2);
  CHECK(*r.gh2 == 0);
  for (const Verdict& v : r.verdicts) CHECK(v.holds.value_or(false));
}

TEST_CASE("two-sphere and the product of Eilenberg-MacLane spaces") {
  PipelineOptions opts;
  opts.max_degree = 4;
  const auto s2 = persistent_model(load_persistent_cdga(read_json_file(data("s2_constant.json")), PSMM_DATA_DIR, 4), opts);
  const auto k = persistent_model(load_persistent_cdga(read_json_file(data("k2k3_constant.json")), PSMM_DATA_DIR, 4), opts);
  const BoundsReport r = bounds_report(s2, k);
  CHECK(r.dB_V.sup == 0);
  CHECK(std::isinf(r.dB_H.per_degree.at(3)));
  CHECK(std::isinf(r.dB_H.per_degree.at(4)));
  CHECK(r.dB_H.per_degree.at(2) == 0);
  CHECK(std::isinf(r.lower_bound()));
}

TEST_CASE("bounds on small random spaces") {
  PipelineOptions opts;
  opts.max_degree = 2;
  std::mt19937 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const MetricSpace x = random_metric(rng, rand_int(rng, 1, 4));
    const MetricSpace y = random_metric(rng, rand_int(rng, 1, 4));
    const BoundsReport r = bounds_report(x, y, opts, true);
    INFO("trial " << trial);
    REQUIRE(r.gh2);
    CHECK(r.dB_H.sup <= *r.gh2 + 1e-9);
    CHECK(r.dB_V_reliable <= *r.gh2 + 1e-9);
  }
}
