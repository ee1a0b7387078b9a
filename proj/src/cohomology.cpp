#include "psmm/cohomology.hpp"

#include <algorithm>
#include <stdexcept>

namespace psmm {

SparseCochain to_sparse(const RatVector& v) {
  SparseCochain s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) s.emplace_back(i, v[i]);
  return s;
}

RatVector to_dense(const SparseCochain& v, std::size_t n) {
  RatVector d(n);
  for (const auto& [i, x] : v) {
    if (i >= n) throw DimensionError("sparse cochain index out of range");
    d[i] = x;
  }
  return d;
}

namespace {

/// r := r - f*c
void axpy(SparseCochain& r, const Rational& f, const SparseCochain& c) {
  SparseCochain out;
  out.reserve(r.size() + c.size());
  auto a = r.begin();
  auto b = c.begin();
  while (a != r.end() || b != c.end()) {
    if (b == c.end() || (a != r.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == r.end() || b->first < a->first) {
      out.emplace_back(b->first, -f * b->second);
      ++b;
    } else {
      Rational x = a->second - f * b->second;
      if (sgn(x) != 0) out.emplace_back(a->first, std::move(x));
      ++a;
      ++b;
    }
  }
  r = std::move(out);
}

void scale(SparseCochain& r, const Rational& f) {
  for (auto& e : r) e.second *= f;
}

Simplex drop_vertex(const Simplex& s, std::size_t i) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (std::size_t t = 0; t < s.size(); ++t)
    if (t != i) f.push_back(s[t]);
  return f;
}

/// Columns of delta^k in sparse form; column sigma lists the cofaces tau of
/// sigma with sign (-1)^i where sigma = tau minus its i-th vertex.
std::vector<SparseCochain> coboundary_columns(const SimplicialComplex& k, int deg) {
  std::vector<SparseCochain> cols(k.count(deg));
  const auto& cofaces = k.simplices(deg + 1);
  for (std::size_t t = 0; t < cofaces.size(); ++t) {
    const Simplex& tau = cofaces[t];
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const auto idx = k.index_of(drop_vertex(tau, i));
      if (!idx) throw std::logic_error("complex is not closed under faces");
      cols[*idx].emplace_back(t, Rational(i % 2 == 0 ? 1 : -1));
    }
  }
  return cols;
}

}  // namespace

// ---------------------------------------------------------------------------

RatVector CohomologyRing::product(int p, std::size_t i, int q, std::size_t j) const {
  if (p < 0 || q < 0 || p + q > max_deg) throw DimensionError("product outside truncation");
  return table[p][q].column(i * dims[q] + j);
}

RatVector CohomologyRing::multiply(int p, const RatVector& x, int q, const RatVector& y) const {
  if (p < 0 || q < 0 || p + q > max_deg) throw DimensionError("product outside truncation");
  if (x.size() != dims[p] || y.size() != dims[q]) throw DimensionError("multiply: coordinate length mismatch");
  RatVector out(dims[p + q]);
  const RatMatrix& t = table[p][q];
  for (std::size_t i = 0; i < dims[p]; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < dims[q]; ++j) {
      if (sgn(y[j]) == 0) continue;
      const Rational f = x[i] * y[j];
      const std::size_t col = i * dims[q] + j;
      for (std::size_t r = 0; r < out.size(); ++r)
        if (sgn(t(r, col)) != 0) out[r] += f * t(r, col);
    }
  }
  return out;
}

CohomologyRing CohomologyRing::empty(int max_deg, std::vector<std::size_t> dims) {
  if (max_deg < 0 || dims.size() != static_cast<std::size_t>(max_deg) + 1)
    throw DimensionError("ring dims must cover degrees 0..max_deg");
  CohomologyRing r;
  r.max_deg = max_deg;
  r.dims = std::move(dims);
  r.labels.resize(r.dims.size());
  for (int k = 0; k <= max_deg; ++k)
    for (std::size_t i = 0; i < r.dims[k]; ++i)
      r.labels[k].push_back("h" + std::to_string(k) + "_" + std::to_string(i));
  r.unit = RatVector(r.dims[0]);
  r.table.assign(r.dims.size(), {});
  for (int p = 0; p <= max_deg; ++p)
    for (int q = 0; p + q <= max_deg; ++q) r.table[p].emplace_back(r.dims[p + q], r.dims[p] * r.dims[q]);
  return r;
}

bool is_graded_commutative(const CohomologyRing& r) {
  for (int p = 0; p <= r.max_deg; ++p)
    for (int q = 0; p + q <= r.max_deg; ++q)
      for (std::size_t i = 0; i < r.dims[p]; ++i)
        for (std::size_t j = 0; j < r.dims[q]; ++j) {
          RatVector a = r.product(p, i, q, j);
          const RatVector b = r.product(q, j, p, i);
          const int sign = (p * q) % 2 == 0 ? 1 : -1;
          for (std::size_t t = 0; t < a.size(); ++t)
            if (a[t] != sign * b[t]) return false;
        }
  return true;
}

bool is_associative(const CohomologyRing& r) {
  for (int p = 0; p <= r.max_deg; ++p)
    for (int q = 0; p + q <= r.max_deg; ++q)
      for (int s = 0; p + q + s <= r.max_deg; ++s)
        for (std::size_t i = 0; i < r.dims[p]; ++i)
          for (std::size_t j = 0; j < r.dims[q]; ++j)
            for (std::size_t k = 0; k < r.dims[s]; ++k) {
              RatVector ek(r.dims[s]);
              ek[k] = 1;
              RatVector ei(r.dims[p]);
              ei[i] = 1;
              const RatVector left = r.multiply(p + q, r.product(p, i, q, j), s, ek);
              const RatVector right = r.multiply(p, ei, q + s, r.product(q, j, s, k));
              if (left != right) return false;
            }
  return true;
}

bool unit_acts_trivially(const CohomologyRing& r) {
  if (r.unit.size() != r.dims[0]) return false;
  for (int p = 0; p <= r.max_deg; ++p)
    for (std::size_t i = 0; i < r.dims[p]; ++i) {
      RatVector e(r.dims[p]);
      e[i] = 1;
      if (r.multiply(0, r.unit, p, e) != e || r.multiply(p, e, 0, r.unit) != e) return false;
    }
  return true;
}

CohomologyRing wedge_reduction(const CohomologyRing& r) {
  std::vector<std::size_t> dims = r.dims;
  dims[0] = 1;
  CohomologyRing w = CohomologyRing::empty(r.max_deg, dims);
  w.top_decomposable_only = r.top_decomposable_only;
  for (int k = 1; k <= r.max_deg; ++k) w.labels[k] = r.labels[k];
  w.labels[0] = {"1"};
  w.unit = RatVector{Rational(1)};
  for (int p = 0; p <= r.max_deg; ++p)
    for (int q = 0; p + q <= r.max_deg; ++q) {
      RatMatrix& t = w.table[p][q];
      if (p == 0 || q == 0) {
        const int d = p + q;
        for (std::size_t i = 0; i < dims[d]; ++i) t(i, i) = 1;
      } else {
        t = r.table[p][q];
      }
    }
  if (!r.representatives.empty()) {
    w.representatives = r.representatives;
    SparseCochain one;
    for (const auto& rep : r.representatives[0])
      for (const auto& e : rep) one.push_back(e);
    std::sort(one.begin(), one.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    w.representatives[0] = {one};
  }
  return w;
}

// ---------------------------------------------------------------------------

std::vector<RatMatrix> coboundaries(const SimplicialComplex& k, int max_deg) {
  if (max_deg < 0) throw DimensionError("max_deg must be nonnegative");
  std::vector<RatMatrix> out;
  for (int d = 0; d <= max_deg; ++d) {
    RatMatrix m(k.count(d + 1), k.count(d));
    const auto cols = coboundary_columns(k, d);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& [r, x] : cols[c]) m(r, c) = x;
    out.push_back(std::move(m));
  }
  return out;
}

SparseCochain cup_product(const SimplicialComplex& k, int p, const SparseCochain& a, int q,
                          const SparseCochain& b) {
  SparseCochain out;
  if (a.empty() || b.empty()) return out;
  std::unordered_map<std::size_t, const Rational*> av, bv;
  for (const auto& [i, x] : a) av.emplace(i, &x);
  for (const auto& [i, x] : b) bv.emplace(i, &x);
  const auto& top = k.simplices(p + q);
  for (std::size_t t = 0; t < top.size(); ++t) {
    const Simplex& tau = top[t];
    const Simplex front(tau.begin(), tau.begin() + p + 1);
    const auto fi = k.index_of(front);
    if (!fi) continue;
    const auto ai = av.find(*fi);
    if (ai == av.end()) continue;
    const Simplex back(tau.begin() + p, tau.end());
    const auto bi = k.index_of(back);
    if (!bi) continue;
    const auto bj = bv.find(*bi);
    if (bj == bv.end()) continue;
    out.emplace_back(t, *ai->second * *bj->second);
  }
  return out;
}

RatVector cup_product(const SimplicialComplex& k, int p, const RatVector& a, int q, const RatVector& b) {
  if (a.size() != k.count(p) || b.size() != k.count(q)) throw DimensionError("cup product: cochain length mismatch");
  return to_dense(cup_product(k, p, to_sparse(a), q, to_sparse(b)), k.count(p + q));
}

// ---------------------------------------------------------------------------

struct ComplexCohomology::Reducers {
  struct Entry {
    SparseCochain vec;  // normalized: coefficient 1 at the key index
    RatVector coord;    // class coordinates; empty for coboundaries
  };
  std::vector<std::unordered_map<std::size_t, Entry>> by_low;
  std::vector<std::size_t> dims;

  /// Reduces z to a residue, accumulating the class coordinates of what was
  /// removed. The residue is empty iff z lies in the span of the entries.
  RatVector reduce(int deg, SparseCochain& z) const {
    RatVector c(dims[deg]);
    const auto& table = by_low[deg];
    while (!z.empty()) {
      const auto it = table.find(z.back().first);
      if (it == table.end()) break;
      const Rational f = z.back().second;
      for (std::size_t t = 0; t < it->second.coord.size(); ++t)
        if (sgn(it->second.coord[t]) != 0) c[t] += f * it->second.coord[t];
      axpy(z, f, it->second.vec);
    }
    return c;
  }
};

ComplexCohomology::~ComplexCohomology() = default;
ComplexCohomology::ComplexCohomology(ComplexCohomology&&) noexcept = default;
ComplexCohomology& ComplexCohomology::operator=(ComplexCohomology&&) noexcept = default;

ComplexCohomology::ComplexCohomology(const SimplicialComplex& k, int max_deg, bool top_decomposable_only)
    : complex_(&k), reducers_(std::make_unique<Reducers>()) {
  if (max_deg < 0) throw DimensionError("max_deg must be nonnegative");
  const bool decomposable_top = top_decomposable_only && max_deg >= 1;
  Reducers& red = *reducers_;
  red.by_low.resize(static_cast<std::size_t>(max_deg) + 1);
  red.dims.assign(static_cast<std::size_t>(max_deg) + 1, 0);
  std::vector<std::vector<SparseCochain>> reps(static_cast<std::size_t>(max_deg) + 1);

  // twisted column reduction of delta^deg with clearing by the pivots of
  // delta^(deg-1); uncleared zero columns are the cohomology classes
  for (int deg = 0; deg <= max_deg; ++deg) {
    if (deg == max_deg && decomposable_top) break;
    const std::size_t n = k.count(deg);
    auto cols = coboundary_columns(k, deg);
    std::unordered_map<std::size_t, std::size_t> pivot_of;
    std::vector<SparseCochain> rcol(n), vcol(n);
    auto& here = red.by_low[deg];
    for (std::size_t j = 0; j < n; ++j) {
      if (here.count(j)) continue;
      SparseCochain r = std::move(cols[j]);
      SparseCochain v{{j, Rational(1)}};
      while (!r.empty()) {
        const auto it = pivot_of.find(r.back().first);
        if (it == pivot_of.end()) break;
        const Rational f = r.back().second;
        axpy(r, f, rcol[it->second]);
        axpy(v, f, vcol[it->second]);
      }
      if (r.empty()) {
        reps[deg].push_back(std::move(v));
        continue;
      }
      const Rational inv = 1 / r.back().second;
      scale(r, inv);
      scale(v, inv);
      pivot_of.emplace(r.back().first, j);
      rcol[j] = std::move(r);
      vcol[j] = std::move(v);
    }
    red.dims[deg] = reps[deg].size();
    for (std::size_t t = 0; t < reps[deg].size(); ++t) {
      RatVector coord(reps[deg].size());
      coord[t] = 1;
      const std::size_t low = reps[deg][t].back().first;
      here.emplace(low, Reducers::Entry{reps[deg][t], std::move(coord)});
    }
    if (deg + 1 <= max_deg)
      for (const auto& [low, j] : pivot_of)
        red.by_low[deg + 1].emplace(low, Reducers::Entry{std::move(rcol[j]), {}});
  }

  // products into degrees below the top, then the decomposable top basis
  std::vector<std::size_t> dims(red.dims.begin(), red.dims.end());
  if (decomposable_top) {
    const int d = max_deg;
    std::vector<SparseCochain> residues;
    for (int p = 1; p < d; ++p)
      for (std::size_t i = 0; i < dims[p]; ++i)
        for (std::size_t j = 0; j < dims[d - p]; ++j) {
          SparseCochain z = cup_product(k, p, reps[p][i], d - p, reps[d - p][j]);
          red.reduce(d, z);
          if (z.empty()) continue;
          // coordinates of earlier residues grow with each new basis element
          for (auto& [low, e] : red.by_low[d])
            if (!e.coord.empty()) e.coord.emplace_back(0);
          const std::size_t t = residues.size();
          RatVector coord(t + 1);
          const Rational inv = 1 / z.back().second;
          coord[t] = inv;
          SparseCochain normalized = z;
          scale(normalized, inv);
          red.by_low[d].emplace(normalized.back().first, Reducers::Entry{std::move(normalized), std::move(coord)});
          residues.push_back(std::move(z));
          ++red.dims[d];
        }
    reps[d] = std::move(residues);
    dims[d] = red.dims[d];
  }

  ring_ = CohomologyRing::empty(max_deg, dims);
  ring_.top_decomposable_only = decomposable_top;
  ring_.representatives = reps;
  SparseCochain one;
  for (std::size_t v = 0; v < k.count(0); ++v) one.emplace_back(v, Rational(1));
  ring_.unit = coordinates(0, one);
  for (int p = 0; p <= max_deg; ++p)
    for (int q = 0; p + q <= max_deg; ++q)
      for (std::size_t i = 0; i < dims[p]; ++i)
        for (std::size_t j = 0; j < dims[q]; ++j) {
          const RatVector c = coordinates(p + q, cup_product(k, p, reps[p][i], q, reps[q][j]));
          ring_.table[p][q].set_column(i * dims[q] + j, c);
        }
}

RatVector ComplexCohomology::coordinates(int deg, const SparseCochain& cocycle) const {
  if (deg < 0 || deg > ring_.max_deg) throw DimensionError("coordinates: degree outside truncation");
  SparseCochain z = cocycle;
  RatVector c = reducers_->reduce(deg, z);
  if (!z.empty()) throw std::logic_error("cochain is not a cocycle in the represented subspace");
  return c;
}

std::vector<RatVector> cohomology_basis(const SimplicialComplex& k, int deg) {
  if (deg < 0) throw DimensionError("degree must be nonnegative");
  const ComplexCohomology h(k, deg);
  std::vector<RatVector> out;
  for (const auto& rep : h.ring().representatives[deg]) out.push_back(to_dense(rep, k.count(deg)));
  return out;
}

CohomologyRing cohomology_ring(const SimplicialComplex& k, int max_deg) {
  return ComplexCohomology(k, max_deg).ring();
}

std::vector<RatMatrix> induced_ring_map(const ComplexCohomology& big, const ComplexCohomology& small) {
  const CohomologyRing& rb = big.ring();
  const CohomologyRing& rs = small.ring();
  if (rb.max_deg != rs.max_deg) throw DimensionError("induced map: truncation degrees differ");
  std::vector<RatMatrix> out;
  for (int deg = 0; deg <= rb.max_deg; ++deg) {
    RatMatrix m(rs.dims[deg], rb.dims[deg]);
    for (std::size_t c = 0; c < rb.dims[deg]; ++c) {
      SparseCochain restricted;
      for (const auto& [idx, x] : rb.representatives[deg][c]) {
        const auto j = small.complex().index_of(big.complex().simplex(deg, idx));
        if (j) restricted.emplace_back(*j, x);
      }
      std::sort(restricted.begin(), restricted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      m.set_column(c, small.coordinates(deg, restricted));
    }
    out.push_back(std::move(m));
  }
  return out;
}

bool is_multiplicative(const std::vector<RatMatrix>& f, const CohomologyRing& source,
                       const CohomologyRing& target) {
  const int top = std::min(source.max_deg, target.max_deg);
  if (f.size() < static_cast<std::size_t>(top) + 1) return false;
  for (int p = 0; p <= top; ++p)
    for (int q = 0; p + q <= top; ++q)
      for (std::size_t i = 0; i < source.dims[p]; ++i)
        for (std::size_t j = 0; j < source.dims[q]; ++j) {
          const RatVector lhs = f[p + q].apply(source.product(p, i, q, j));
          const RatVector rhs = target.multiply(p, f[p].column(i), q, f[q].column(j));
          if (lhs != rhs) return false;
        }
  return true;
}

}  // namespace psmm
