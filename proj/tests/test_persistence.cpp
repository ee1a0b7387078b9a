#include "psmm/persistence.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psmm;
using psmm::testing::rand_int;

namespace {

std::vector<Bar> merged(std::vector<Bar> bars) {
  std::sort(bars.begin(), bars.end(),
            [](const Bar& x, const Bar& y) { return std::tie(x.birth, x.death) < std::tie(y.birth, y.death); });
  std::vector<Bar> out;
  for (const Bar& b : bars) {
    if (!out.empty() && out.back().birth == b.birth && out.back().death == b.death)
      out.back().mult += b.mult;
    else
      out.push_back(b);
  }
  return out;
}

std::vector<Bar> bars_of(const Barcode& b, int degree) {
  auto it = b.bars.find(degree);
  return it == b.bars.end() ? std::vector<Bar>{} : it->second;
}

bool same_bars(const std::vector<Bar>& a, const std::vector<Bar>& b) {
  const auto x = merged(a), y = merged(b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i].birth != y[i].birth || x[i].death != y[i].death || x[i].mult != y[i].mult) return false;
  return true;
}

void check_pointwise(const PersistentGVec& p, const Barcode& b) {
  for (int k = 0; k <= p.max_degree; ++k)
    for (std::size_t s = 0; s < p.stage_count(); ++s) {
      std::size_t covering = 0;
      for (const Bar& bar : bars_of(b, k))
        if (bar.birth <= p.lower(s) && bar.death >= p.upper(s)) covering += bar.mult;
      CHECK(covering == p.dim(s, k));
    }
}

}  // namespace

TEST_CASE("interval modules") {
  const std::vector<double> grid{1, 2};
  const auto full = interval_module(0, kInf, grid, 0);
  for (std::size_t s = 0; s < full.stage_count(); ++s) CHECK(full.dim(s, 0) == 1);
  for (const auto& m : full.maps) CHECK(m[0] == RatMatrix::identity(1));

  const auto mid = interval_module(1, 2, grid, 0);
  CHECK(mid.dim(0, 0) == 0);
  CHECK(mid.dim(1, 0) == 1);
  CHECK(mid.dim(2, 0) == 0);

  const auto split = direct_sum(interval_module(0, 1, {1}, 0), interval_module(1, kInf, {1}, 0));
  CHECK(split.dim(0, 0) == 1);
  CHECK(split.dim(1, 0) == 1);
  CHECK(split.maps[0][0].is_zero());
  const Barcode b = barcode(split);
  CHECK(same_bars(bars_of(b, 0), {{0, 1, 1}, {1, kInf, 1}}));

  CHECK_THROWS(interval_module(0.5, 2, grid, 0));
}

TEST_CASE("barcodes in several degrees and directions") {
  const std::vector<double> grid{1, 2, 3};
  for (Direction dir : {Direction::covariant, Direction::contravariant}) {
    PersistentGVec p = interval_module(0, 3, grid, 2, 3, dir);
    p = direct_sum(p, interval_module(1, kInf, grid, 0, 3, dir));
    p = direct_sum(p, interval_module(2, 3, grid, 2, 3, dir));
    p = direct_sum(p, interval_module(1, kInf, grid, 0, 3, dir));
    REQUIRE_NOTHROW(p.validate());
    const Barcode b = barcode(p);
    CHECK(same_bars(bars_of(b, 0), {{1, kInf, 2}}));
    CHECK(same_bars(bars_of(b, 2), {{0, 3, 1}, {2, 3, 1}}));
    CHECK(b.total(1) == 0);
    check_pointwise(p, b);
  }
}

TEST_CASE("bottleneck examples") {
  const Barcode a{{{0, {{0, 1, 1}}}}};
  const Barcode b{{{0, {{0, 1.2, 1}}}}};
  CHECK(bottleneck(a, a).sup == 0);
  CHECK(bottleneck(a, b).sup == Catch::Approx(0.2));
  CHECK(bottleneck(a, b).per_degree.at(0) == Catch::Approx(0.2));

  const Barcode h4{{{4, {{0, kInf, 1}}}}};
  CHECK(std::isinf(bottleneck(h4, Barcode{}).sup));
  CHECK(bar_distance({0, 1, 1}, {0.5, 3, 1}) == 2);
  CHECK(deletion_cost({1, 3, 1}) == 1);
  CHECK(std::isinf(deletion_cost({1, kInf, 1})));
  CHECK(bottleneck_degree({{0, 4, 2}}, {{0, 4, 1}}) == 2);
}

TEST_CASE("interleaving examples") {
  const std::vector<double> grid{1, 1.2};
  const auto p = interval_module(0, 1, grid, 0);
  const auto q = interval_module(0, 1.2, grid, 0);
  CHECK(interleaving_check(p, p, 0));
  CHECK(interleaving_check(p, q, 0.2 + 1e-12));
  CHECK_FALSE(interleaving_check(p, q, 0.1));

  const std::vector<double> g3{1, 2, 3};
  const auto x = direct_sum(interval_module(0, 2, g3, 0), interval_module(1, 3, g3, 0));
  const auto y = direct_sum(interval_module(1, 3, g3, 0), interval_module(0, 2, g3, 0));
  CHECK(interleaving_check(x, y, 0));
}

TEST_CASE("barcode round trip on random direct sums") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = testing::random_module(rng);
    INFO("trial " << trial);
    const Barcode b = barcode(r.module);
    CHECK(same_bars(bars_of(b, 0), r.bars));
    check_pointwise(r.module, b);
  }
}

TEST_CASE("bottleneck is a pseudometric") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> grid{1, 2, 3, 4, 5};
    const Barcode a = barcode(testing::random_module(rng, 4, 5, grid).module);
    const Barcode b = barcode(testing::random_module(rng, 4, 5, grid).module);
    const Barcode c = barcode(testing::random_module(rng, 4, 5, grid).module);
    const double ab = bottleneck(a, b).sup;
    CHECK(ab == bottleneck(b, a).sup);
    CHECK(bottleneck(a, a).sup == 0);
    CHECK(bottleneck(a, c).sup <= ab + bottleneck(b, c).sup);
  }
}

TEST_CASE("interleaving oracle matches the bottleneck distance") {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto r = testing::random_module(rng, 3, 4);
    const auto s = testing::random_module(rng, 3, 4, r.grid);
    const double d = bottleneck(barcode(r.module), barcode(s.module)).sup;
    INFO("trial " << trial << " bottleneck " << d);
    if (std::isinf(d)) {
      CHECK_FALSE(interleaving_check(r.module, s.module, 100));
      continue;
    }
    CHECK(interleaving_check(r.module, s.module, d + 1e-9));
    if (d > 0) CHECK_FALSE(interleaving_check(r.module, s.module, d - 0.25));
  }
}

TEST_CASE("interleaved pairs have bottleneck at most delta") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const auto r = testing::random_module(rng, 3, 4);
    const auto s = testing::random_module(rng, 3, 4, r.grid);
    const double d = bottleneck(barcode(r.module), barcode(s.module)).sup;
    for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0})
      if (interleaving_check(r.module, s.module, delta)) CHECK(d <= delta + 1e-12);
  }
}
