#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance binary.

#include "psmm/cdga.hpp"
#include "psmm/metric_vr.hpp"
#include "psmm/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace psmm::testing {

/// Canonical n/d; mpq_class does not reduce two-argument constructions.
inline Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline MetricSpace circle_metric(int n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = std::min(std::abs(i - j), n - std::abs(i - j));
      d[i][j] = 2 * M_PI * k / n;
    }
  return make_metric(d);
}

/// Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
inline std::vector<Simplex> torus7_facets() {
  std::vector<Simplex> f;
  for (int i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return f;
}

/// Boundary of the octahedron: one vertex from each antipodal pair.
inline std::vector<Simplex> octahedron_facets() {
  std::vector<Simplex> f;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) f.push_back({a, 2 + b, 4 + c});
  return f;
}

inline int rand_int(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random cocycle of degree k: a combination of closed monomials and
/// differentials of monomials of degree k-1.
inline Polynomial random_cocycle(const SullivanAlgebra& alg, int k, std::mt19937& rng, int terms = 2) {
  std::vector<Polynomial> pool;
  if (k >= 0 && k <= alg.truncation()) {
    for (const auto& m : alg.monomial_basis(k))
      if (is_zero(alg.d(m))) pool.push_back({{m, Rational(1)}});
  }
  if (k >= 1 && k - 1 <= alg.truncation())
    for (const auto& m : alg.monomial_basis(k - 1)) {
      Polynomial dm = alg.d(m);
      if (!is_zero(dm)) pool.push_back(std::move(dm));
    }
  Polynomial out;
  if (pool.empty()) return out;
  for (int t = 0; t < terms; ++t) {
    const int c = rand_int(rng, -2, 2);
    if (c != 0) add_to(out, pool[rand_int(rng, 0, static_cast<int>(pool.size()) - 1)], c);
  }
  return out;
}

/// Random Sullivan algebra whose differentials are random cocycles in the
/// earlier generators.
inline SullivanAlgebra random_sullivan(std::mt19937& rng, int max_gens = 5, int max_deg = 4, int truncation = 8) {
  const int count = rand_int(rng, 2, max_gens);
  std::vector<int> degrees;
  for (int i = 0; i < count; ++i) degrees.push_back(rand_int(rng, 1, max_deg));
  std::sort(degrees.begin(), degrees.end());
  SullivanAlgebra alg = SullivanAlgebra::make({}, {}, truncation);
  std::map<int, int> per_degree;
  for (int deg : degrees) {
    const Polynomial d = random_cocycle(alg, deg + 1, rng);
    char name[32];
    std::snprintf(name, sizeof name, "x%d_%02d", deg, per_degree[deg]++);
    alg = alg.with_generator({name, deg}, d);
  }
  return alg;
}

/// Random morphism A -> B with A built alongside: each generator of A is
/// either closed and sent to a random cocycle, or has differential d(m) for
/// a monomial m of A and is sent to f(m) plus a random cocycle.
inline CdgaMorphism random_morphism_into(std::shared_ptr<const SullivanAlgebra> b, std::mt19937& rng,
                                         int max_gens = 4, int max_deg = 4) {
  const int count = rand_int(rng, 1, max_gens);
  std::vector<int> degrees;
  for (int i = 0; i < count; ++i) degrees.push_back(rand_int(rng, 1, max_deg));
  std::sort(degrees.begin(), degrees.end());
  SullivanAlgebra a = SullivanAlgebra::make({}, {}, b->truncation());
  std::vector<Polynomial> images;
  std::map<int, int> per_degree;
  for (int deg : degrees) {
    auto current = std::make_shared<const SullivanAlgebra>(a);
    CdgaMorphism partial{current, b, images};
    Polynomial d;
    Polynomial img = random_cocycle(*b, deg, rng);
    const auto monos = a.monomial_basis(deg);
    if (!monos.empty() && rand_int(rng, 0, 1) == 1) {
      const Monomial& m = monos[rand_int(rng, 0, static_cast<int>(monos.size()) - 1)];
      d = a.d(m);
      add_to(img, partial.apply({{m, Rational(1)}}));
    }
    char name[32];
    std::snprintf(name, sizeof name, "u%d_%02d", deg, per_degree[deg]++);
    a = a.with_generator({name, deg}, d);
    images.push_back(std::move(img));
  }
  return CdgaMorphism{std::make_shared<const SullivanAlgebra>(a), b, images};
}

/// Persistent homology by column reduction of the filtered boundary matrix;
/// bars in degrees <= max_deg, reported in filtration parameters.
inline Barcode homology_barcode(const FilteredComplex& fc, int max_deg) {
  struct Cell {
    std::size_t birth;
    int dim;
    Simplex s;
  };
  std::vector<Cell> cells;
  const SimplicialComplex& last = fc.stages.back();
  for (int k = 0; k <= std::min(max_deg + 1, last.dimension()); ++k)
    for (const auto& s : last.simplices(k)) {
      std::size_t b = 0;
      while (!fc.stages[b].contains(s)) ++b;
      cells.push_back({b, k, s});
    }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    return std::tie(x.birth, x.dim) < std::tie(y.birth, y.dim);
  });
  std::map<Simplex, std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i) order[cells[i].s] = i;

  using Column = std::map<std::size_t, Rational>;
  std::vector<Column> cols(cells.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const Simplex& s = cells[j].s;
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      for (std::size_t v = 0; v < s.size(); ++v)
        if (v != drop) face.push_back(s[v]);
      cols[j][order.at(face)] = drop % 2 == 0 ? 1 : -1;
    }
  }
  std::map<std::size_t, std::size_t> low_owner;
  std::vector<bool> paired(cells.size(), false);
  Barcode out;
  auto param = [&](std::size_t stage) { return stage == 0 ? 0.0 : fc.critical_values[stage - 1]; };
  for (std::size_t j = 0; j < cells.size(); ++j) {
    Column& c = cols[j];
    while (!c.empty()) {
      const std::size_t low = c.rbegin()->first;
      auto it = low_owner.find(low);
      if (it == low_owner.end()) break;
      const Column& other = cols[it->second];
      const Rational factor = c.at(low) / other.at(low);
      for (const auto& [r, v] : other) {
        Rational& x = c[r];
        x -= factor * v;
        if (sgn(x) == 0) c.erase(r);
      }
    }
    if (c.empty()) continue;
    const std::size_t low = c.rbegin()->first;
    low_owner[low] = j;
    paired[low] = paired[j] = true;
    if (cells[low].dim <= max_deg && cells[low].birth < cells[j].birth)
      out.bars[cells[low].dim].push_back({param(cells[low].birth), param(cells[j].birth), 1});
  }
  for (std::size_t j = 0; j < cells.size(); ++j)
    if (!paired[j] && cols[j].empty() && cells[j].dim <= max_deg)
      out.bars[cells[j].dim].push_back({param(cells[j].birth), kInf, 1});
  // merge multiplicities
  Barcode merged;
  for (auto& [k, bars] : out.bars) {
    std::sort(bars.begin(), bars.end(),
              [](const Bar& x, const Bar& y) { return std::tie(x.birth, x.death) < std::tie(y.birth, y.death); });
    for (const Bar& b : bars) {
      auto& list = merged.bars[k];
      if (!list.empty() && list.back().birth == b.birth && list.back().death == b.death)
        ++list.back().mult;
      else
        list.push_back(b);
    }
  }
  return merged;
}

/// Barcode restricted to degrees <= max_deg.
inline Barcode truncate(const Barcode& b, int max_deg) {
  Barcode out;
  for (const auto& [k, v] : b.bars)
    if (k <= max_deg) out.bars[k] = v;
  return out;
}

struct RandomModule {
  std::vector<double> grid;
  std::vector<Bar> bars;
  PersistentGVec module;
};

/// Direct sum of up to max_bars random interval modules in degree 0 on an
/// integer grid of up to max_grid points.
inline RandomModule random_module(std::mt19937& rng, int max_bars = 4, int max_grid = 5,
                                  std::vector<double> grid = {}) {
  RandomModule r;
  if (grid.empty()) {
    const int g = rand_int(rng, 1, max_grid);
    std::vector<int> pool{1, 2, 3, 4, 5, 6, 7, 8};
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < g; ++i) grid.push_back(pool[i]);
    std::sort(grid.begin(), grid.end());
  }
  r.grid = grid;
  std::vector<double> births{0.0};
  births.insert(births.end(), grid.begin(), grid.end());
  std::vector<double> deaths = grid;
  deaths.push_back(kInf);
  r.module = interval_module(0, kInf, grid, 0);
  r.module.dims.assign(r.module.stage_count(), {0});
  for (auto& per : r.module.maps)
    for (auto& m : per) m = RatMatrix(0, 0);
  const int n = rand_int(rng, 0, max_bars);
  for (int i = 0; i < n; ++i) {
    const double b = births[rand_int(rng, 0, static_cast<int>(births.size()) - 1)];
    std::vector<double> later;
    for (double d : deaths)
      if (d > b) later.push_back(d);
    const double d = later[rand_int(rng, 0, static_cast<int>(later.size()) - 1)];
    r.bars.push_back({b, d, 1});
    r.module = direct_sum(r.module, interval_module(b, d, grid, 0));
  }
  return r;
}

}  // namespace psmm::testing
