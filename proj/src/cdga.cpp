#include "psmm/cdga.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace psmm {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

bool odd(int degree) { return degree % 2 != 0; }

}  // namespace

void add_to(Polynomial& acc, const Polynomial& p, const Rational& factor) {
  for (const auto& [m, c] : p) {
    Rational& slot = acc[m];
    slot += factor * c;
    if (sgn(slot) == 0) acc.erase(m);
  }
}

Polynomial scaled(const Polynomial& p, const Rational& factor) {
  Polynomial out;
  if (sgn(factor) == 0) return out;
  for (const auto& [m, c] : p) out.emplace(m, c * factor);
  return out;
}

bool is_zero(const Polynomial& p) { return p.empty(); }

// ---------------------------------------------------------------------------

SullivanAlgebra SullivanAlgebra::make(std::vector<Generator> generators,
                                      const std::map<std::string, std::vector<WordTerm>>& differential,
                                      int truncation) {
  std::stable_sort(generators.begin(), generators.end(), [](const Generator& a, const Generator& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.name < b.name;
  });
  SullivanAlgebra alg;
  alg.gens_ = std::move(generators);
  alg.truncation_ = truncation;
  for (std::size_t i = 0; i < alg.gens_.size(); ++i) {
    if (alg.gens_[i].degree < 1)
      throw InputError("generator " + alg.gens_[i].name + " must have degree at least 1");
    if (i > 0 && alg.gens_[i].name == alg.gens_[i - 1].name)
      throw InputError("duplicate generator name " + alg.gens_[i].name);
  }
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < alg.gens_.size(); ++i)
    if (!by_name.emplace(alg.gens_[i].name, i).second)
      throw InputError("duplicate generator name " + alg.gens_[i].name);

  alg.diff_.assign(alg.gens_.size(), {});
  for (const auto& [name, terms] : differential) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw InputError("differential given for unknown generator " + name);
    Polynomial d;
    for (const auto& term : terms) {
      Polynomial prod{{Monomial{}, term.coeff}};
      std::vector<int> seen(alg.gens_.size(), 0);
      for (const auto& w : term.word) {
        const auto g = by_name.find(w);
        if (g == by_name.end()) throw InputError("unknown generator " + w + " in differential of " + name);
        if (odd(alg.gens_[g->second].degree) && seen[g->second]++)
          throw InputError("odd generator " + w + " squared in differential of " + name);
        prod = alg.multiply(prod, alg.generator_poly(g->second));
      }
      add_to(d, prod);
    }
    alg.diff_[it->second] = std::move(d);
  }
  alg.validate();
  return alg;
}

SullivanAlgebra SullivanAlgebra::from_canonical(std::vector<Generator> generators,
                                                std::vector<Polynomial> differential, int truncation) {
  if (generators.size() != differential.size())
    throw InputError("one differential per generator is required");
  SullivanAlgebra alg;
  alg.gens_ = std::move(generators);
  alg.diff_ = std::move(differential);
  alg.truncation_ = truncation;
  for (std::size_t i = 0; i < alg.gens_.size(); ++i) {
    if (alg.gens_[i].degree < 1)
      throw InputError("generator " + alg.gens_[i].name + " must have degree at least 1");
    if (i > 0) {
      const auto& a = alg.gens_[i - 1];
      const auto& b = alg.gens_[i];
      if (a.degree > b.degree || (a.degree == b.degree && a.name >= b.name))
        throw InputError("generators are not in canonical order");
    }
  }
  alg.validate();
  return alg;
}

void SullivanAlgebra::validate() const {
  if (truncation_ < 0) throw InputError("truncation degree must be nonnegative");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    for (const auto& [m, c] : diff_[i]) {
      if (m.size() > gens_.size()) throw InputError("differential refers to an unknown generator");
      for (std::size_t g = 0; g < m.size(); ++g)
        if (m[g] < 0 || (odd(gens_[g].degree) && m[g] > 1))
          throw InputError("differential of " + gens_[i].name + " is not in canonical form");
      if (degree(m) != gens_[i].degree + 1)
        throw InputError("differential of " + gens_[i].name + " does not raise degree by one");
      (void)c;
    }
    if (!d(diff_[i]).empty()) throw InputError("differential squares to a nonzero element on " + gens_[i].name);
  }
}

SullivanAlgebra SullivanAlgebra::with_generator(Generator g, Polynomial d) const {
  if (!gens_.empty()) {
    const auto& last = gens_.back();
    if (g.degree < last.degree || (g.degree == last.degree && g.name <= last.name))
      throw std::logic_error("appended generator must sort after existing ones");
  }
  if (g.degree < 1) throw InputError("generator degree must be at least 1");
  SullivanAlgebra out = *this;
  out.gens_.push_back(std::move(g));
  out.diff_.push_back(std::move(d));
  const std::size_t i = out.gens_.size() - 1;
  for (const auto& [m, c] : out.diff_[i])
    if (out.degree(m) != out.gens_[i].degree + 1)
      throw std::logic_error("appended differential has the wrong degree");
  if (!out.d(out.diff_[i]).empty()) throw std::logic_error("appended differential is not closed");
  return out;
}

SullivanAlgebra SullivanAlgebra::with_truncation(int truncation) const {
  SullivanAlgebra out = *this;
  out.truncation_ = truncation;
  return out;
}

std::optional<std::size_t> SullivanAlgebra::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

int SullivanAlgebra::degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens_[i].degree;
  return d;
}

int SullivanAlgebra::word_length(const Monomial& m) const {
  int l = 0;
  for (int e : m) l += e;
  return l;
}

Monomial SullivanAlgebra::generator_monomial(std::size_t gen) const {
  Monomial m(gen + 1, 0);
  m[gen] = 1;
  return m;
}

std::optional<std::pair<int, Monomial>> SullivanAlgebra::multiply(const Monomial& a, const Monomial& b) const {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    if (out[i] > 1 && odd(gens_[i].degree)) return std::nullopt;
  }
  // each odd factor of b moves left past the odd factors of a that follow it
  int odd_after = 0;
  int swaps = 0;
  for (std::size_t i = out.size(); i-- > 0;) {
    if (!odd(gens_[i].degree)) continue;
    if (i < b.size() && b[i]) swaps += odd_after;
    if (i < a.size() && a[i]) ++odd_after;
  }
  trim(out);
  return std::make_pair(swaps % 2 == 0 ? 1 : -1, std::move(out));
}

Polynomial SullivanAlgebra::multiply(const Polynomial& a, const Polynomial& b) const {
  Polynomial out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      const auto prod = multiply(ma, mb);
      if (!prod) continue;
      Rational& slot = out[prod->second];
      slot += prod->first * ca * cb;
      if (sgn(slot) == 0) out.erase(prod->second);
    }
  return out;
}

Polynomial SullivanAlgebra::d(const Monomial& m) const {
  // m = x * rest with x its first generator; d(x rest) = dx rest + (-1)^|x| x d(rest)
  std::size_t first = 0;
  while (first < m.size() && m[first] == 0) ++first;
  if (first == m.size()) return {};
  Monomial rest = m;
  --rest[first];
  trim(rest);
  const Polynomial rest_poly{{rest, Rational(1)}};
  Polynomial out = multiply(diff_[first], rest_poly);
  const Polynomial tail = multiply(generator_poly(first), d(rest));
  add_to(out, tail, odd(gens_[first].degree) ? -1 : 1);
  return out;
}

Polynomial SullivanAlgebra::d(const Polynomial& p) const {
  Polynomial out;
  for (const auto& [m, c] : p) add_to(out, d(m), c);
  return out;
}

std::vector<Monomial> SullivanAlgebra::monomial_basis(int deg) const {
  if (deg < 0) throw DimensionError("negative degree");
  if (deg > truncation_) throw DimensionError("degree beyond the truncation degree");
  std::vector<Monomial> out;
  Monomial cur(gens_.size(), 0);
  // generators are sorted by degree, so the scan stops at the first too large
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (remaining == 0) {
      Monomial m = cur;
      trim(m);
      out.push_back(std::move(m));
      return;
    }
    if (i == gens_.size() || gens_[i].degree > remaining) return;
    const int g = gens_[i].degree;
    const int max_e = odd(g) ? 1 : remaining / g;
    for (int e = 0; e <= max_e && e * g <= remaining; ++e) {
      cur[i] = e;
      self(self, i + 1, remaining - e * g);
    }
    cur[i] = 0;
  };
  rec(rec, 0, deg);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SullivanAlgebra::monomial_count(int deg) const {
  if (deg < 0) return 0;
  std::vector<std::size_t> ways(static_cast<std::size_t>(deg) + 1, 0);
  ways[0] = 1;
  for (const auto& g : gens_) {
    if (g.degree > deg) break;
    if (odd(g.degree)) {
      for (int t = deg; t >= g.degree; --t) ways[t] += ways[t - g.degree];
    } else {
      for (int t = g.degree; t <= deg; ++t) ways[t] += ways[t - g.degree];
    }
  }
  return ways[deg];
}

std::string SullivanAlgebra::format(const Polynomial& p) const {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p) {
    const bool neg = sgn(c) < 0;
    const Rational mag = neg ? Rational(-c) : c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    const bool unit_mono = word_length(m) == 0;
    if (mag != 1 || unit_mono) os << mag.get_str() << (unit_mono ? "" : "*");
    bool first_factor = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      os << (first_factor ? "" : "*") << gens_[i].name;
      if (m[i] > 1) os << '^' << m[i];
      first_factor = false;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

RatVector FiniteCdga::apply_d(int k, const RatVector& x) const {
  if (k < 0 || k >= top) return {};
  return d[k].apply(x);
}

RatVector FiniteCdga::multiply(int p, const RatVector& x, int q, const RatVector& y) const {
  if (p + q > top) throw DimensionError("product beyond the top degree");
  RatVector out(dims[p + q]);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (sgn(y[j]) == 0) continue;
      const RatVector e = basis_product(p, i, q, j);
      const Rational f = x[i] * y[j];
      for (std::size_t t = 0; t < e.size(); ++t)
        if (sgn(e[t]) != 0) out[t] += f * e[t];
    }
  }
  return out;
}

namespace {

struct TruncationData {
  SullivanAlgebra alg;
  std::vector<std::vector<Monomial>> bases;
  std::vector<std::map<Monomial, std::size_t>> index;
};

}  // namespace

SullivanTruncation::SullivanTruncation(const SullivanAlgebra& alg, int top) : top_(top) {
  if (top < 0) throw DimensionError("negative truncation");
  auto data = std::make_shared<TruncationData>();
  data->alg = alg.with_truncation(std::max(top, alg.truncation()));
  for (int k = 0; k <= top; ++k) {
    data->bases.push_back(data->alg.monomial_basis(k));
    std::map<Monomial, std::size_t> idx;
    for (std::size_t i = 0; i < data->bases[k].size(); ++i) idx.emplace(data->bases[k][i], i);
    data->index.push_back(std::move(idx));
  }
  bases_ = data->bases;
  index_ = data->index;

  cdga_.top = top;
  for (int k = 0; k <= top; ++k) cdga_.dims.push_back(bases_[k].size());
  for (int k = 0; k < top; ++k) {
    RatMatrix m(cdga_.dims[k + 1], cdga_.dims[k]);
    for (std::size_t j = 0; j < bases_[k].size(); ++j)
      for (const auto& [mono, c] : data->alg.d(bases_[k][j])) m(index_[k + 1].at(mono), j) = c;
    cdga_.d.push_back(std::move(m));
  }
  cdga_.unit = RatVector{Rational(1)};
  std::shared_ptr<const TruncationData> shared = data;
  cdga_.basis_product = [shared](int p, std::size_t i, int q, std::size_t j) {
    RatVector out(shared->bases[p + q].size());
    const auto prod = shared->alg.multiply(shared->bases[p][i], shared->bases[q][j]);
    if (prod) out[shared->index[p + q].at(prod->second)] = prod->first;
    return out;
  };
}

std::optional<std::size_t> SullivanTruncation::index_of(int k, const Monomial& m) const {
  if (k < 0 || k > top_) return std::nullopt;
  const auto it = index_[k].find(m);
  if (it == index_[k].end()) return std::nullopt;
  return it->second;
}

RatVector SullivanTruncation::to_vector(int k, const Polynomial& p) const {
  if (k < 0 || k > top_) throw DimensionError("degree outside the truncation");
  RatVector v(bases_[k].size());
  for (const auto& [m, c] : p) {
    const auto it = index_[k].find(m);
    if (it == index_[k].end()) throw DimensionError("polynomial is not homogeneous of the requested degree");
    v[it->second] = c;
  }
  return v;
}

Polynomial SullivanTruncation::to_poly(int k, const RatVector& v) const {
  Polynomial p;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) p.emplace(bases_[k][i], v[i]);
  return p;
}

FiniteCdga formal_cdga(const CohomologyRing& r) {
  FiniteCdga a;
  a.top = r.max_deg;
  a.dims = r.dims;
  for (int k = 0; k < r.max_deg; ++k) a.d.emplace_back(r.dims[k + 1], r.dims[k]);
  a.unit = r.unit;
  auto shared = std::make_shared<const CohomologyRing>(r);
  a.basis_product = [shared](int p, std::size_t i, int q, std::size_t j) { return shared->product(p, i, q, j); };
  return a;
}

// ---------------------------------------------------------------------------

FiniteCohomology::FiniteCohomology(const FiniteCdga& a, int max_deg) : top_(a.top), max_deg_(max_deg) {
  if (max_deg < 0 || max_deg > a.top) throw DimensionError("cohomology degree outside the algebra's range");
  for (int k = 0; k <= max_deg && k < a.top; ++k) d_.push_back(a.d[k]);
  for (int k = 0; k <= max_deg; ++k) {
    const std::size_t n = a.dims[k];
    std::vector<RatVector> boundaries;
    if (k > 0) boundaries = a.d[k - 1].columns();
    const RatMatrix z = k < a.top ? kernel_basis(a.d[k]) : RatMatrix::identity(n);
    const RatMatrix b = RatMatrix::from_columns(n, boundaries);
    const auto picked = quotient_basis(n, b, z);
    std::vector<RatVector> reps;
    for (std::size_t c : picked) reps.push_back(z.column(c));
    std::vector<RatVector> all = boundaries;
    all.insert(all.end(), reps.begin(), reps.end());
    boundary_solvers_.emplace_back(n, boundaries);
    class_solvers_.emplace_back(n, all);
    boundary_cols_.push_back(boundaries.size());
    reps_.push_back(std::move(reps));
  }
}

bool FiniteCohomology::is_cocycle(int k, const RatVector& x) const {
  return k >= top_ || is_zero(d_[k].apply(x));
}

bool FiniteCohomology::is_coboundary(int k, const RatVector& x) const {
  return boundary_solvers_.at(k).express(x).has_value();
}

std::optional<RatVector> FiniteCohomology::primitive(int k, const RatVector& x) const {
  if (k == 0) return is_zero(x) ? std::optional<RatVector>(RatVector{}) : std::nullopt;
  // coefficients on the columns of d[k-1] are coordinates in degree k-1
  return boundary_solvers_.at(k).express(x);
}

RatVector FiniteCohomology::coordinates(int k, const RatVector& cocycle) const {
  if (k < 0 || k > max_deg_) throw DimensionError("coordinates: degree outside range");
  if (!is_cocycle(k, cocycle)) throw std::logic_error("coordinates: argument is not a cocycle");
  const auto c = class_solvers_[k].express(cocycle);
  if (!c) throw std::logic_error("coordinates: cocycle outside the computed span");
  return RatVector(c->begin() + static_cast<std::ptrdiff_t>(boundary_cols_[k]), c->end());
}

// ---------------------------------------------------------------------------

CdgaCohomology cdga_cohomology(const SullivanAlgebra& alg, int max_deg) {
  if (max_deg < 0) throw DimensionError("negative degree");
  if (max_deg >= alg.truncation())
    throw DimensionError("cohomology through degree " + std::to_string(max_deg) + " needs truncation above it");
  const SullivanTruncation t(alg, max_deg + 1);
  const FiniteCohomology h(t.cdga(), max_deg);
  CdgaCohomology out;
  out.space.dims.resize(static_cast<std::size_t>(max_deg) + 1);
  out.space.labels.resize(out.space.dims.size());
  out.representatives.resize(out.space.dims.size());
  for (int k = 0; k <= max_deg; ++k) {
    out.space.dims[k] = h.dim(k);
    for (const auto& rep : h.representatives(k)) {
      Polynomial p = t.to_poly(k, rep);
      out.space.labels[k].push_back("[" + alg.format(p) + "]");
      out.representatives[k].push_back(std::move(p));
    }
  }
  return out;
}

LinearPart linear_part(const SullivanAlgebra& alg) {
  LinearPart lp;
  int top = 0;
  for (const auto& g : alg.generators()) top = std::max(top, g.degree);
  lp.v.dims.assign(static_cast<std::size_t>(top) + 1, 0);
  lp.v.labels.resize(lp.v.dims.size());
  std::vector<std::vector<std::size_t>> by_degree(lp.v.dims.size());
  std::vector<std::size_t> slot(alg.generator_count());
  for (std::size_t i = 0; i < alg.generator_count(); ++i) {
    const int d = alg.generators()[i].degree;
    slot[i] = by_degree[d].size();
    by_degree[d].push_back(i);
    lp.v.labels[d].push_back(alg.generators()[i].name);
    ++lp.v.dims[d];
  }
  for (int k = 0; k <= top; ++k) {
    RatMatrix q(k + 1 <= top ? lp.v.dims[k + 1] : 0, lp.v.dims[k]);
    for (std::size_t c = 0; c < by_degree[k].size(); ++c)
      for (const auto& [m, coeff] : alg.differential(by_degree[k][c]))
        if (alg.word_length(m) == 1) {
          std::size_t g = 0;
          while (m[g] == 0) ++g;
          q(slot[g], c) = coeff;
        }
    lp.q_d.push_back(std::move(q));
  }
  return lp;
}

bool is_minimal(const SullivanAlgebra& alg) {
  for (const auto& q : linear_part(alg).q_d)
    if (!q.is_zero()) return false;
  return true;
}

bool differential_is_decomposable(const SullivanAlgebra& alg) {
  for (std::size_t i = 0; i < alg.generator_count(); ++i)
    for (const auto& [m, c] : alg.differential(i))
      if (alg.word_length(m) < 2) return false;
  return true;
}

// ---------------------------------------------------------------------------

Polynomial CdgaMorphism::apply(const Polynomial& p) const {
  Polynomial out;
  for (const auto& [m, c] : p) {
    Polynomial prod{{Monomial{}, Rational(1)}};
    for (std::size_t g = 0; g < m.size(); ++g)
      for (int e = 0; e < m[g]; ++e) prod = target->multiply(prod, images[g]);
    add_to(out, prod, c);
  }
  return out;
}

CdgaMorphism identity_morphism(std::shared_ptr<const SullivanAlgebra> alg) {
  CdgaMorphism f;
  f.source = alg;
  f.target = alg;
  for (std::size_t i = 0; i < alg->generator_count(); ++i) f.images.push_back(alg->generator_poly(i));
  return f;
}

CdgaMorphism compose(const CdgaMorphism& second, const CdgaMorphism& first) {
  CdgaMorphism out;
  out.source = first.source;
  out.target = second.target;
  for (const auto& img : first.images) out.images.push_back(second.apply(img));
  return out;
}

void validate_morphism(const CdgaMorphism& f) {
  if (!f.source || !f.target) throw InputError("morphism needs a source and a target");
  if (f.images.size() != f.source->generator_count())
    throw InputError("morphism needs one image per source generator");
  for (std::size_t i = 0; i < f.images.size(); ++i) {
    const int deg = f.source->generators()[i].degree;
    for (const auto& [m, c] : f.images[i])
      if (f.target->degree(m) != deg)
        throw InputError("image of " + f.source->generators()[i].name + " has the wrong degree");
    Polynomial lhs = f.target->d(f.images[i]);
    const Polynomial rhs = f.apply(f.source->differential(i));
    add_to(lhs, rhs, -1);
    if (!lhs.empty())
      throw InputError("morphism does not commute with the differential on " + f.source->generators()[i].name);
  }
}

std::vector<RatMatrix> linear_part_map(const CdgaMorphism& f) {
  int top = 0;
  for (const auto& g : f.source->generators()) top = std::max(top, g.degree);
  for (const auto& g : f.target->generators()) top = std::max(top, g.degree);
  std::vector<std::vector<std::size_t>> src(static_cast<std::size_t>(top) + 1), tgt(src.size());
  for (std::size_t i = 0; i < f.source->generator_count(); ++i) src[f.source->generators()[i].degree].push_back(i);
  std::vector<std::size_t> slot(f.target->generator_count());
  for (std::size_t i = 0; i < f.target->generator_count(); ++i) {
    auto& list = tgt[f.target->generators()[i].degree];
    slot[i] = list.size();
    list.push_back(i);
  }
  std::vector<RatMatrix> out;
  for (int k = 0; k <= top; ++k) {
    RatMatrix m(tgt[k].size(), src[k].size());
    for (std::size_t c = 0; c < src[k].size(); ++c)
      for (const auto& [mono, coeff] : f.images[src[k][c]])
        if (f.target->word_length(mono) == 1) {
          std::size_t g = 0;
          while (mono[g] == 0) ++g;
          m(slot[g], c) = coeff;
        }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<RatMatrix> cohomology_map(const CdgaMorphism& f, int max_deg) {
  const SullivanTruncation ts(*f.source, max_deg + 1);
  const SullivanTruncation tt(*f.target, max_deg + 1);
  const FiniteCohomology hs(ts.cdga(), max_deg);
  const FiniteCohomology ht(tt.cdga(), max_deg);
  std::vector<RatMatrix> out;
  for (int k = 0; k <= max_deg; ++k) {
    RatMatrix m(ht.dim(k), hs.dim(k));
    for (std::size_t c = 0; c < hs.dim(k); ++c) {
      const Polynomial img = f.apply(ts.to_poly(k, hs.representatives(k)[c]));
      m.set_column(c, ht.coordinates(k, tt.to_vector(k, img)));
    }
    out.push_back(std::move(m));
  }
  return out;
}

HomotopyCheck check_homotopy_necessary(const CdgaMorphism& f0, const CdgaMorphism& f1, int max_deg) {
  if (f0.source->generators().size() != f1.source->generators().size() ||
      f0.target->generators().size() != f1.target->generators().size())
    throw InputError("homotopy check needs morphisms with the same source and target");
  HomotopyCheck r;
  r.cohomology_equal = cohomology_map(f0, max_deg) == cohomology_map(f1, max_deg);
  r.linear_part_equal = linear_part_map(f0) == linear_part_map(f1);
  const SullivanTruncation ts(*f0.source, std::max(2, max_deg + 1));
  r.source_h1_zero = FiniteCohomology(ts.cdga(), 1).dim(1) == 0;
  return r;
}

}  // namespace psmm
