#include "psmm/persistence.hpp"

#include "psmm/metric_vr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

namespace psmm {

namespace {

RatMatrix zeros(std::size_t r, std::size_t c) { return RatMatrix(r, c); }

RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

bool same_grid(const std::vector<double>& a, const std::vector<double>& b) { return a == b; }

}  // namespace

std::size_t PersistentGVec::dim(std::size_t stage, int degree) const {
  if (stage >= dims.size() || degree < 0 || degree >= static_cast<int>(dims[stage].size())) return 0;
  return dims[stage][degree];
}

void PersistentGVec::validate() const {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw DimensionError("grid must be strictly increasing");
  if (!grid.empty() && !(grid.front() > 0)) throw DimensionError("grid values must be positive");
  if (dims.size() != stage_count()) throw DimensionError("dims must have one entry per stage");
  if (maps.size() + 1 != stage_count()) throw DimensionError("maps must connect consecutive stages");
  for (std::size_t s = 0; s < maps.size(); ++s) {
    if (maps[s].size() != static_cast<std::size_t>(max_degree + 1))
      throw DimensionError("maps must cover every degree");
    for (int k = 0; k <= max_degree; ++k) {
      std::size_t src = direction == Direction::covariant ? dim(s, k) : dim(s + 1, k);
      std::size_t dst = direction == Direction::covariant ? dim(s + 1, k) : dim(s, k);
      const RatMatrix& m = maps[s][k];
      if (m.rows() != dst || m.cols() != src) throw DimensionError("structure map has wrong shape");
    }
  }
}

std::size_t Barcode::total(int degree) const {
  auto it = bars.find(degree);
  if (it == bars.end()) return 0;
  std::size_t n = 0;
  for (const Bar& b : it->second) n += b.mult;
  return n;
}

bool operator==(const Barcode& a, const Barcode& b) {
  auto nonempty = [](const Barcode& c) {
    std::map<int, std::vector<std::tuple<double, double, std::size_t>>> out;
    for (const auto& [k, v] : c.bars)
      for (const Bar& bar : v)
        if (bar.mult > 0) out[k].emplace_back(bar.birth, bar.death, bar.mult);
    return out;
  };
  return nonempty(a) == nonempty(b);
}

PersistentGVec interval_module(double b, double e, const std::vector<double>& grid, int degree, int max_degree,
                               Direction dir) {
  auto is_endpoint = [&](double x) {
    return x == 0.0 || x == kInf || std::find(grid.begin(), grid.end(), x) != grid.end();
  };
  if (!is_endpoint(b) || !is_endpoint(e) || !(b < e) || b == kInf)
    throw DimensionError("interval endpoints must be 0, grid values or inf with birth < death");
  if (degree < 0) throw DimensionError("negative degree");
  PersistentGVec p;
  p.grid = grid;
  p.max_degree = std::max(degree, max_degree);
  p.direction = dir;
  const std::size_t stages = p.stage_count();
  p.dims.assign(stages, std::vector<std::size_t>(p.max_degree + 1, 0));
  for (std::size_t s = 0; s < stages; ++s)
    if (p.lower(s) >= b && p.upper(s) <= e) p.dims[s][degree] = 1;
  p.maps.resize(stages - 1);
  for (std::size_t s = 0; s + 1 < stages; ++s) {
    for (int k = 0; k <= p.max_degree; ++k) {
      std::size_t lo = p.dim(s, k);
      std::size_t hi = p.dim(s + 1, k);
      RatMatrix m = dir == Direction::covariant ? zeros(hi, lo) : zeros(lo, hi);
      if (lo == 1 && hi == 1) m(0, 0) = 1;
      p.maps[s].push_back(std::move(m));
    }
  }
  return p;
}

PersistentGVec direct_sum(const PersistentGVec& p, const PersistentGVec& q) {
  if (!same_grid(p.grid, q.grid)) throw DimensionError("direct sum needs a shared grid");
  if (p.direction != q.direction) throw DimensionError("direct sum needs a shared direction");
  PersistentGVec out;
  out.grid = p.grid;
  out.direction = p.direction;
  out.max_degree = std::max(p.max_degree, q.max_degree);
  const std::size_t stages = out.stage_count();
  out.dims.assign(stages, std::vector<std::size_t>(out.max_degree + 1, 0));
  for (std::size_t s = 0; s < stages; ++s)
    for (int k = 0; k <= out.max_degree; ++k) out.dims[s][k] = p.dim(s, k) + q.dim(s, k);
  out.maps.resize(stages - 1);
  auto map_or_zero = [](const PersistentGVec& m, std::size_t s, int k) {
    if (k <= m.max_degree) return m.maps[s][k];
    return RatMatrix();
  };
  for (std::size_t s = 0; s + 1 < stages; ++s)
    for (int k = 0; k <= out.max_degree; ++k)
      out.maps[s].push_back(block_diag(map_or_zero(p, s, k), map_or_zero(q, s, k)));
  return out;
}

Barcode barcode(const PersistentGVec& p) {
  p.validate();
  const std::size_t n = p.stage_count();
  Barcode out;
  for (int k = 0; k <= p.max_degree; ++k) {
    // r[a][b]: rank of the structure map between stages a <= b.
    std::vector<std::vector<std::size_t>> r(n, std::vector<std::size_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
      RatMatrix acc = RatMatrix::identity(p.dim(a, k));
      r[a][a] = p.dim(a, k);
      for (std::size_t b = a + 1; b < n; ++b) {
        acc = p.direction == Direction::covariant ? p.maps[b - 1][k] * acc : acc * p.maps[b - 1][k];
        r[a][b] = rank(acc);
        if (r[a][b] == 0) break;
      }
    }
    auto rk = [&](std::ptrdiff_t a, std::ptrdiff_t b) -> long {
      if (a < 0 || b >= static_cast<std::ptrdiff_t>(n)) return 0;
      return static_cast<long>(r[a][b]);
    };
    std::vector<Bar> bars;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        auto ia = static_cast<std::ptrdiff_t>(a);
        auto ib = static_cast<std::ptrdiff_t>(b);
        long mult = rk(ia, ib) - rk(ia - 1, ib) - rk(ia, ib + 1) + rk(ia - 1, ib + 1);
        if (mult < 0) throw std::logic_error("negative bar multiplicity");
        if (mult > 0) bars.push_back({p.lower(a), p.upper(b), static_cast<std::size_t>(mult)});
      }
    }
    std::sort(bars.begin(), bars.end(), [](const Bar& x, const Bar& y) {
      return std::tie(x.birth, x.death) < std::tie(y.birth, y.death);
    });
    if (!bars.empty()) out.bars[k] = std::move(bars);
  }
  return out;
}

double bar_distance(const Bar& a, const Bar& b) {
  double db = std::abs(a.birth - b.birth);
  if (std::isinf(a.death) && std::isinf(b.death)) return db;
  if (std::isinf(a.death) || std::isinf(b.death)) return kInf;
  return std::max(db, std::abs(a.death - b.death));
}

double deletion_cost(const Bar& a) { return std::isinf(a.death) ? kInf : (a.death - a.birth) / 2; }

namespace {

std::vector<Bar> expand(const std::vector<Bar>& bars) {
  std::vector<Bar> out;
  for (const Bar& b : bars)
    for (std::size_t i = 0; i < b.mult; ++i) out.push_back({b.birth, b.death, 1});
  return out;
}

// Kuhn's augmenting-path matching; true iff every left vertex is matched.
bool has_perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t right_count) {
  std::vector<std::ptrdiff_t> match_right(right_count, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<std::ptrdiff_t>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < adj.size(); ++u) {
    seen.assign(right_count, 0);
    if (!augment(u)) return false;
  }
  return true;
}

bool matchable(const std::vector<Bar>& a, const std::vector<Bar>& b, double delta) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // Left: a bars then diagonal copies of b. Right: b bars then diagonal copies of a.
  std::vector<std::vector<std::size_t>> adj(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (bar_distance(a[i], b[j]) <= delta) adj[i].push_back(j);
    if (deletion_cost(a[i]) <= delta) adj[i].push_back(m + i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (deletion_cost(b[j]) <= delta) adj[n + j].push_back(j);
    for (std::size_t i = 0; i < n; ++i) adj[n + j].push_back(m + i);
  }
  return has_perfect_matching(adj, m + n);
}

}  // namespace

double bottleneck_degree(const std::vector<Bar>& bars_a, const std::vector<Bar>& bars_b) {
  const std::vector<Bar> a = expand(bars_a);
  const std::vector<Bar> b = expand(bars_b);
  std::set<double> candidates{0.0};
  for (const Bar& x : a) {
    candidates.insert(deletion_cost(x));
    for (const Bar& y : b) candidates.insert(bar_distance(x, y));
  }
  for (const Bar& y : b) candidates.insert(deletion_cost(y));
  std::vector<double> c;
  for (double v : candidates)
    if (std::isfinite(v)) c.push_back(v);
  // Feasibility is monotone in delta.
  std::size_t lo = 0;
  std::size_t hi = c.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (matchable(a, b, c[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo < c.size() ? c[lo] : kInf;
}

Bottleneck bottleneck(const Barcode& a, const Barcode& b) {
  Bottleneck out;
  std::set<int> degrees;
  for (const auto& [k, v] : a.bars) degrees.insert(k);
  for (const auto& [k, v] : b.bars) degrees.insert(k);
  static const std::vector<Bar> none;
  for (int k : degrees) {
    auto ia = a.bars.find(k);
    auto ib = b.bars.find(k);
    double d = bottleneck_degree(ia == a.bars.end() ? none : ia->second, ib == b.bars.end() ? none : ib->second);
    out.per_degree[k] = d;
    out.sup = std::max(out.sup, d);
  }
  return out;
}

namespace {

constexpr double kCellTol = 1e-9;

// Piecewise-constant view of a covariant module in one degree, indexed by
// real parameter; stage -1 is the zero space for t <= 0.
struct ParamView {
  const PersistentGVec& p;
  int degree;

  std::ptrdiff_t stage(double t) const {
    if (t <= kCellTol) return -1;
    std::ptrdiff_t s = 0;
    for (double g : p.grid)
      if (g < t - kCellTol) ++s;
    return s;
  }
  std::size_t dim_at(double t) const {
    std::ptrdiff_t s = stage(t);
    return s < 0 ? 0 : p.dim(static_cast<std::size_t>(s), degree);
  }
  // Structure map from parameter t to t' >= t.
  RatMatrix shift(double t, double t2) const {
    std::ptrdiff_t a = stage(t);
    std::ptrdiff_t b = stage(t2);
    if (degree > p.max_degree) return RatMatrix(0, 0);
    if (a < 0) return RatMatrix(dim_at(t2), 0);
    RatMatrix acc = RatMatrix::identity(p.dim(static_cast<std::size_t>(a), degree));
    for (std::ptrdiff_t s = a; s < b; ++s) acc = p.maps[s][degree] * acc;
    return acc;
  }
};

struct Cells {
  std::vector<double> breaks;  // sorted cell right endpoints
  std::vector<double> reps;    // one parameter per cell

  std::size_t cell_of(double u) const {
    auto it = std::lower_bound(breaks.begin(), breaks.end(), u - kCellTol);
    return static_cast<std::size_t>(it - breaks.begin());
  }
};

Cells make_cells(const std::vector<double>& grid, double delta) {
  std::vector<double> pts;
  for (int k = 0; k <= 2; ++k) {
    pts.push_back(-k * delta);
    for (double g : grid) pts.push_back(g - k * delta);
  }
  std::sort(pts.begin(), pts.end());
  Cells c;
  for (double x : pts)
    if (c.breaks.empty() || x - c.breaks.back() > kCellTol) c.breaks.push_back(x);
  c.reps = c.breaks;
  c.reps.push_back(c.breaks.back() + 1.0);
  return c;
}

// A family of matrices, one per cell, stored as a flat vector.
struct CellMaps {
  std::vector<std::size_t> rows, cols, offset;
  std::size_t size = 0;

  RatMatrix at(const RatVector& flat, std::size_t c) const {
    RatMatrix m(rows[c], cols[c]);
    for (std::size_t i = 0; i < rows[c]; ++i)
      for (std::size_t j = 0; j < cols[c]; ++j) m(i, j) = flat[offset[c] + i * cols[c] + j];
    return m;
  }
};

// Basis of natural transformations P -> Q shifted by delta, per cell.
std::pair<CellMaps, std::vector<RatVector>> natural_maps(const ParamView& p, const ParamView& q,
                                                         const Cells& cells, double delta) {
  CellMaps layout;
  const std::size_t n = cells.reps.size();
  for (std::size_t c = 0; c < n; ++c) {
    double t = cells.reps[c];
    layout.rows.push_back(q.dim_at(t + delta));
    layout.cols.push_back(p.dim_at(t));
    layout.offset.push_back(layout.size);
    layout.size += layout.rows.back() * layout.cols.back();
  }
  // Q(shift) phi_c - phi_{c+1} P(shift) = 0 for consecutive cells.
  std::vector<RatVector> eqs;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    double t = cells.reps[c];
    double t2 = cells.reps[c + 1];
    RatMatrix qs = q.shift(t + delta, t2 + delta);
    RatMatrix ps = p.shift(t, t2);
    for (std::size_t i = 0; i < layout.rows[c + 1]; ++i) {
      for (std::size_t j = 0; j < layout.cols[c]; ++j) {
        RatVector row = zero_vector(layout.size);
        for (std::size_t l = 0; l < layout.rows[c]; ++l)
          row[layout.offset[c] + l * layout.cols[c] + j] += qs(i, l);
        for (std::size_t l = 0; l < layout.cols[c + 1]; ++l)
          row[layout.offset[c + 1] + i * layout.cols[c + 1] + l] -= ps(l, j);
        if (!is_zero(row)) eqs.push_back(std::move(row));
      }
    }
  }
  std::vector<RatVector> basis;
  if (layout.size == 0) return {layout, basis};
  RatMatrix sys(eqs.size(), layout.size);
  for (std::size_t r = 0; r < eqs.size(); ++r)
    for (std::size_t c = 0; c < layout.size; ++c) sys(r, c) = eqs[r][c];
  if (eqs.empty()) {
    for (std::size_t c = 0; c < layout.size; ++c) {
      RatVector e = zero_vector(layout.size);
      e[c] = 1;
      basis.push_back(std::move(e));
    }
  } else {
    basis = kernel_basis(sys).columns();
  }
  return {layout, basis};
}

bool interleaved_in_degree(const PersistentGVec& pm, const PersistentGVec& qm, int degree, double delta) {
  ParamView p{pm, degree};
  ParamView q{qm, degree};
  Cells cells = make_cells(pm.grid, delta);
  auto [phi_layout, phi_basis] = natural_maps(p, q, cells, delta);
  auto [psi_layout, psi_basis] = natural_maps(q, p, cells, delta);
  const std::size_t n = cells.reps.size();
  if (phi_basis.size() > 24) throw CapExceeded("interleaving search space too large");

  std::vector<std::size_t> shifted(n);
  std::vector<RatMatrix> p2(n), q2(n);
  std::vector<std::size_t> p2_rank(n);
  for (std::size_t c = 0; c < n; ++c) {
    double t = cells.reps[c];
    shifted[c] = cells.cell_of(t + delta);
    p2[c] = p.shift(t, t + 2 * delta);
    q2[c] = q.shift(t, t + 2 * delta);
    p2_rank[c] = rank(p2[c]);
  }

  const std::size_t combos = std::size_t{1} << phi_basis.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    RatVector phi = zero_vector(phi_layout.size);
    for (std::size_t b = 0; b < phi_basis.size(); ++b)
      if (mask >> b & 1)
        for (std::size_t i = 0; i < phi_layout.size; ++i) phi[i] += phi_basis[b][i];
    std::vector<RatMatrix> phi_c(n);
    bool viable = true;
    for (std::size_t c = 0; c < n && viable; ++c) {
      phi_c[c] = phi_layout.at(phi, c);
      viable = rank(phi_c[c]) >= p2_rank[c];
    }
    if (!viable) continue;

    // Unknowns: coefficients y over psi_basis. Each entry of
    // psi(t+delta) phi(t) - P(t -> t+2delta) and phi(t+delta) psi(t) - Q(t -> t+2delta)
    // is affine in y.
    const std::size_t nb = psi_basis.size();
    std::vector<RatVector> rows;
    RatVector rhs;
    auto add_eqs = [&](const std::vector<RatMatrix>& per_basis, const RatMatrix& target) {
      for (std::size_t i = 0; i < target.rows(); ++i)
        for (std::size_t j = 0; j < target.cols(); ++j) {
          RatVector row(nb);
          for (std::size_t b = 0; b < nb; ++b) row[b] = per_basis[b](i, j);
          rows.push_back(std::move(row));
          rhs.push_back(target(i, j));
        }
    };
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t s = shifted[c];
      std::vector<RatMatrix> left, right;
      for (std::size_t b = 0; b < nb; ++b) {
        left.push_back(psi_layout.at(psi_basis[b], s) * phi_c[c]);
        right.push_back(phi_c[s] * psi_layout.at(psi_basis[b], c));
      }
      if (nb == 0) {
        if (!p2[c].is_zero() || !q2[c].is_zero()) {
          viable = false;
          break;
        }
        continue;
      }
      add_eqs(left, p2[c]);
      add_eqs(right, q2[c]);
    }
    if (!viable) continue;
    if (nb == 0) return true;
    RatMatrix sys(rows.size(), nb);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t b = 0; b < nb; ++b) sys(r, b) = rows[r][b];
    if (rows.empty() || solve(sys, rhs)) return true;
  }
  return false;
}

}  // namespace

bool interleaving_check(const PersistentGVec& p, const PersistentGVec& q, double delta) {
  p.validate();
  q.validate();
  if (!same_grid(p.grid, q.grid)) throw DimensionError("interleaving check needs a shared grid");
  if (p.direction != Direction::covariant || q.direction != Direction::covariant)
    throw DimensionError("interleaving check supports covariant modules only");
  if (!(delta >= 0)) throw DimensionError("delta must be non-negative");
  // The cell structure, hence the answer, only changes at |a - b| and
  // |a - b| / 2 over a, b in {0} and the grid, and the set of admissible
  // deltas is a closed ray, so delta may be snapped down to such a value.
  std::vector<double> pts{0.0};
  pts.insert(pts.end(), p.grid.begin(), p.grid.end());
  double snapped = 0;
  for (double a : pts)
    for (double b : pts)
      for (double c : {std::abs(a - b), std::abs(a - b) / 2})
        if (c <= delta + kCellTol) snapped = std::max(snapped, c);
  const int top = std::max(p.max_degree, q.max_degree);
  for (int k = 0; k <= top; ++k)
    if (!interleaved_in_degree(p, q, k, snapped)) return false;
  return true;
}

}  // namespace psmm
