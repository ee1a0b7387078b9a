#include "psmm/minmodel.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace psmm {

namespace {

std::string generator_name(int deg, std::size_t idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%d_%03zu", deg, idx);
  return buf;
}

int max_generator_degree(const SullivanAlgebra& alg) {
  int top = 0;
  for (const auto& g : alg.generators()) top = std::max(top, g.degree);
  return top;
}

/// rho on monomials: rho(x * rest) = rho(x) rho(rest) with x the first factor.
class RhoEvaluator {
 public:
  RhoEvaluator(const SullivanAlgebra& alg, const FiniteCdga& a, const std::vector<RatVector>& images)
      : alg_(alg), a_(a), images_(images) {}

  const RatVector& monomial(const Monomial& m) {
    const auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    RatVector value;
    std::size_t first = 0;
    while (first < m.size() && m[first] == 0) ++first;
    if (first == m.size()) {
      value = a_.unit;
    } else {
      Monomial rest = m;
      --rest[first];
      while (!rest.empty() && rest.back() == 0) rest.pop_back();
      const RatVector tail = monomial(rest);
      value = a_.multiply(alg_.generators()[first].degree, images_[first], alg_.degree(rest), tail);
    }
    return memo_.emplace(m, std::move(value)).first->second;
  }

  RatVector poly(int k, const Polynomial& p) {
    RatVector out(a_.dim(k));
    for (const auto& [m, c] : p) {
      const RatVector& v = monomial(m);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) out[i] += c * v[i];
    }
    return out;
  }

  RatVector vec(const SullivanTruncation& t, int k, const RatVector& x) {
    RatVector out(a_.dim(k));
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (sgn(x[j]) == 0) continue;
      const RatVector& v = monomial(t.basis(k)[j]);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) out[i] += x[j] * v[i];
    }
    return out;
  }

  /// Input-basis matrix of rho on the degree-k monomials of t.
  RatMatrix matrix(const SullivanTruncation& t, int k) {
    RatMatrix m(a_.dim(k), t.basis(k).size());
    for (std::size_t j = 0; j < t.basis(k).size(); ++j) m.set_column(j, monomial(t.basis(k)[j]));
    return m;
  }

 private:
  const SullivanAlgebra& alg_;
  const FiniteCdga& a_;
  const std::vector<RatVector>& images_;
  std::map<Monomial, RatVector> memo_;
};

class Builder {
 public:
  Builder(std::shared_ptr<const FiniteCdga> a, int n, const ModelOptions& opts)
      : a_(std::move(a)), n_(n), opts_(opts), ha_(*a_, n + 1) {
    alg_ = SullivanAlgebra::from_canonical({}, {}, n + 1);
  }

  MinimalModel run() {
    if (ha_.dim(0) != 1)
      throw InputError("input is not connected: H^0 has dimension " + std::to_string(ha_.dim(0)));
    MinimalModel mm;
    mm.input = a_;
    mm.h1_nonzero = n_ >= 1 && ha_.dim(1) > 0;
    bool stop = false;
    int done = std::min(n_, 1);
    if (mm.h1_nonzero) {
      coker_step(1);
      for (int it = 0;; ++it) {
        mm.deg1_iterations = it;
        if (!fits(3)) {
          mm.deg1_converged = false;
          mm.complete = false;
          break;
        }
        const std::size_t killed = kernel_step(1, it < opts_.deg1_cap);
        if (killed == 0) break;
        if (it >= opts_.deg1_cap) {
          mm.deg1_converged = false;
          break;
        }
      }
      stop = !mm.deg1_converged;
      if (stop) done = 0;
    }
    for (int k = 2; k <= n_ && !stop; ++k) {
      for (int pass = 0;; ++pass) {
        if (!fits(k + 2)) {
          mm.complete = false;
          stop = true;
          break;
        }
        const std::size_t added = coker_step(k) + kernel_step(k, true);
        if (!has_degree_one() || added == 0) break;
        if (pass + 1 >= opts_.pass_cap) {
          mm.complete = false;
          stop = true;
          break;
        }
      }
      if (!stop) done = k;
    }
    mm.degree = done;
    mm.model = std::make_shared<const SullivanAlgebra>(alg_);
    mm.rho = rho_;
    return mm;
  }

 private:
  bool has_degree_one() const {
    return !alg_.generators().empty() && alg_.generators().front().degree == 1;
  }

  bool fits(int top) const {
    for (int d = 0; d <= top; ++d)
      if (alg_.monomial_count(d) > opts_.basis_cap) return false;
    return true;
  }

  void add(int deg, Polynomial d, RatVector image) {
    std::size_t& c = counter_[deg];
    alg_ = alg_.with_generator({generator_name(deg, c++), deg}, std::move(d));
    rho_.push_back(std::move(image));
  }

  RatMatrix h_rho(const SullivanTruncation& t, const FiniteCohomology& hm, int k) {
    RhoEvaluator ev(alg_, *a_, rho_);
    RatMatrix m(ha_.dim(k), hm.dim(k));
    for (std::size_t c = 0; c < hm.dim(k); ++c) m.set_column(c, ha_.coordinates(k, ev.vec(t, k, hm.representatives(k)[c])));
    return m;
  }

  /// Closed degree-k generators mapping onto coker H^k(rho).
  std::size_t coker_step(int k) {
    const SullivanTruncation t(alg_, k + 1);
    const FiniteCohomology hm(t.cdga(), k);
    const RatMatrix image = h_rho(t, hm, k);
    const auto picked = quotient_basis(ha_.dim(k), image, RatMatrix::identity(ha_.dim(k)));
    for (std::size_t c : picked) add(k, {}, ha_.representatives(k)[c]);
    return picked.size();
  }

  /// Degree-k generators whose differentials kill ker H^(k+1)(rho); returns
  /// the kernel dimension and adds generators only when asked.
  std::size_t kernel_step(int k, bool adjoin) {
    const SullivanTruncation t(alg_, k + 2);
    const FiniteCohomology hm(t.cdga(), k + 1);
    const RatMatrix kernel = kernel_basis(h_rho(t, hm, k + 1));
    if (!adjoin) return kernel.cols();
    std::vector<std::pair<Polynomial, RatVector>> pending;
    RhoEvaluator ev(alg_, *a_, rho_);
    for (std::size_t c = 0; c < kernel.cols(); ++c) {
      RatVector z(t.basis(k + 1).size());
      for (std::size_t i = 0; i < hm.dim(k + 1); ++i) {
        const Rational& f = kernel(i, c);
        if (sgn(f) == 0) continue;
        const RatVector& rep = hm.representatives(k + 1)[i];
        for (std::size_t j = 0; j < z.size(); ++j)
          if (sgn(rep[j]) != 0) z[j] += f * rep[j];
      }
      auto x = ha_.primitive(k + 1, ev.vec(t, k + 1, z));
      if (!x) throw LiftingError("kernel class of H^" + std::to_string(k + 1) + "(rho) has no primitive in the input");
      pending.emplace_back(t.to_poly(k + 1, z), std::move(*x));
    }
    for (auto& [d, x] : pending) add(k, std::move(d), std::move(x));
    return kernel.cols();
  }

  std::shared_ptr<const FiniteCdga> a_;
  int n_;
  ModelOptions opts_;
  FiniteCohomology ha_;
  SullivanAlgebra alg_;
  std::vector<RatVector> rho_;
  std::map<int, std::size_t> counter_;
};

}  // namespace

MinimalModel minimal_model(std::shared_ptr<const FiniteCdga> a, int n, const ModelOptions& opts) {
  if (n < 0) throw InputError("model degree must be nonnegative");
  if (a->top <= n) throw InputError("input must be known through degree " + std::to_string(n + 1));
  MinimalModel mm = Builder(a, n, opts).run();
  mm.report = verify_quasi_iso(mm, n);
  return mm;
}

MinimalModel minimal_model(const CohomologyRing& r, int n, const ModelOptions& opts) {
  return minimal_model(std::make_shared<const FiniteCdga>(formal_cdga(r)), n, opts);
}

MinimalModel minimal_model(const SullivanAlgebra& alg, int n, const ModelOptions& opts) {
  const SullivanTruncation t(alg, n + 2);
  return minimal_model(std::make_shared<const FiniteCdga>(t.cdga()), n, opts);
}

RatVector apply_rho(const MinimalModel& mm, int k, const Polynomial& p) {
  RhoEvaluator ev(*mm.model, *mm.input, mm.rho);
  return ev.poly(k, p);
}

QuasiIsoReport verify_quasi_iso(const MinimalModel& mm, int max_deg) {
  QuasiIsoReport rep;
  const int top = std::min(max_deg, mm.input->top - 1);
  // stop where the model's monomial bases get too large to materialize
  int reach = -1;
  while (reach < top && mm.model->monomial_count(reach + 2) <= 20000) ++reach;
  if (reach < 0) return rep;
  const SullivanTruncation t(*mm.model, reach + 1);
  const FiniteCohomology hm(t.cdga(), reach);
  const FiniteCohomology ha(*mm.input, reach);
  RhoEvaluator ev(*mm.model, *mm.input, mm.rho);
  bool ok = true;
  for (int k = 0; k <= reach; ++k) {
    RatMatrix m(ha.dim(k), hm.dim(k));
    for (std::size_t c = 0; c < hm.dim(k); ++c) m.set_column(c, ha.coordinates(k, ev.vec(t, k, hm.representatives(k)[c])));
    const std::size_t r = rank(m);
    rep.model_dims.push_back(hm.dim(k));
    rep.input_dims.push_back(ha.dim(k));
    rep.ranks.push_back(r);
    ok = ok && hm.dim(k) == ha.dim(k) && r == ha.dim(k);
    if (ok) rep.verified_degree = k;
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

RatMatrix zero_if_empty(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }

/// Stacks [a b; c d] given block shapes.
RatMatrix blocks(const RatMatrix& a, const RatMatrix& b, const RatMatrix& c, const RatMatrix& d) {
  RatMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) m(a.rows() + i, j) = c(i, j);
    for (std::size_t j = 0; j < d.cols(); ++j) m(a.rows() + i, c.cols() + j) = d(i, j);
  }
  return m;
}

RatVector concat(const RatVector& a, const RatVector& b) {
  RatVector out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

CdgaMorphism sullivan_representative(const std::vector<RatMatrix>& f, const MinimalModel& a, const MinimalModel& b,
                                     int max_deg) {
  const FiniteCdga& B = *b.input;
  const int top = std::max(max_generator_degree(*a.model), 0);
  if (top > B.top) throw LiftingError("target input is not known in the degrees of the source generators");
  if (f.size() < static_cast<std::size_t>(top) + 1) throw DimensionError("input map is missing degrees");

  CdgaMorphism phi;
  phi.source = a.model;
  phi.target = b.model;
  phi.images.assign(a.model->generator_count(), {});

  const SullivanTruncation tb(*b.model, top + 1);
  RhoEvaluator rho_b(*b.model, B, b.rho);
  std::vector<RatMatrix> rho_mats;
  for (int k = 0; k <= top; ++k) rho_mats.push_back(rho_b.matrix(tb, k));

  for (std::size_t v = 0; v < a.model->generator_count(); ++v) {
    const int n = a.model->generators()[v].degree;
    const RatVector c = tb.to_vector(n + 1, phi.apply(a.model->differential(v)));
    const RatVector psi = f[n].apply(a.rho[v]);
    const RatMatrix& dm = tb.cdga().d[n];
    const RatMatrix& rb = rho_mats[n];
    const RatMatrix db = n >= 1 ? B.d[n - 1] : zero_if_empty(B.dim(n), 0);
    RatMatrix neg_db = db;
    for (std::size_t i = 0; i < neg_db.rows(); ++i)
      for (std::size_t j = 0; j < neg_db.cols(); ++j) neg_db(i, j) = -neg_db(i, j);

    // rho_B x agrees with f(rho_A v) up to a coboundary
    auto sol = solve(blocks(dm, RatMatrix(dm.rows(), db.cols()), rb, neg_db), concat(c, psi));
    std::optional<RatVector> x;
    if (sol) x = RatVector(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(dm.cols()));
    // otherwise only require the difference to be a cocycle
    if (!x && n < B.top) {
      const RatMatrix dr = B.d[n] * rb;
      x = solve(blocks(dm, RatMatrix(dm.rows(), 0), dr, RatMatrix(dr.rows(), 0)), concat(c, B.d[n].apply(psi)));
    }
    if (!x) x = solve(dm, c);
    if (!x)
      throw LiftingError("no lift for generator " + a.model->generators()[v].name +
                         ": the image of its differential is not exact in the target model");
    phi.images[v] = tb.to_poly(n, *x);
  }
  if (!representative_contract_holds(phi, f, a, b, max_deg))
    throw LiftingError("lifted map does not induce the prescribed map on cohomology");
  return phi;
}

bool representative_contract_holds(const CdgaMorphism& phi, const std::vector<RatMatrix>& f, const MinimalModel& a,
                                   const MinimalModel& b, int max_deg) {
  const int top = std::min({max_deg, a.input->top - 1, b.input->top - 1});
  if (top < 0) return true;
  const SullivanTruncation ta(*a.model, top + 1);
  const SullivanTruncation tb(*b.model, top + 1);
  const FiniteCohomology ha(ta.cdga(), top);
  const FiniteCohomology hb(*b.input, top);
  RhoEvaluator rho_a(*a.model, *a.input, a.rho);
  RhoEvaluator rho_b(*b.model, *b.input, b.rho);
  for (int k = 0; k <= top; ++k)
    for (const auto& rep : ha.representatives(k)) {
      const Polynomial img = phi.apply(ta.to_poly(k, rep));
      const RatVector lhs = hb.coordinates(k, rho_b.poly(k, img));
      const RatVector rhs = hb.coordinates(k, f[k].apply(rho_a.vec(ta, k, rep)));
      if (lhs != rhs) return false;
    }
  return true;
}

}  // namespace psmm
