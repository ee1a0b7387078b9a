#include "psmm/pipeline.hpp"

#include "psmm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psmm {

namespace {

std::string stage_list(const std::vector<std::size_t>& stages) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < stages.size(); ++i) out << (i ? "," : "") << stages[i];
  out << ']';
  return out.str();
}

std::size_t generator_count(const SullivanAlgebra& alg, int degree) {
  std::size_t n = 0;
  for (const auto& g : alg.generators()) n += g.degree == degree;
  return n;
}

RatMatrix padded(const std::vector<RatMatrix>& ms, int k, std::size_t rows, std::size_t cols) {
  if (k < static_cast<int>(ms.size())) return ms[k];
  return RatMatrix(rows, cols);
}

bool linear_parts_compose(const CdgaMorphism& first, const CdgaMorphism& second, int max_degree) {
  const std::vector<RatMatrix> q1 = linear_part_map(first);
  const std::vector<RatMatrix> q2 = linear_part_map(second);
  const std::vector<RatMatrix> q21 = linear_part_map(compose(second, first));
  for (int k = 0; k <= max_degree; ++k) {
    const std::size_t a = generator_count(*first.source, k);
    const std::size_t b = generator_count(*first.target, k);
    const std::size_t c = generator_count(*second.target, k);
    if (padded(q2, k, c, b) * padded(q1, k, b, a) != padded(q21, k, c, a)) return false;
  }
  return true;
}

StageModel stage_from(MinimalModel mm, std::vector<std::size_t> h_dims, bool wedge) {
  StageModel st;
  st.model = mm.model;
  st.h_dims = std::move(h_dims);
  st.wedge_reduced = wedge;
  st.h1_nonzero = mm.h1_nonzero;
  st.deg1_converged = mm.deg1_converged;
  st.complete = mm.complete;
  st.verified_degree = mm.verified_degree();
  st.minimal = std::move(mm);
  return st;
}

bool liftable(const StageModel& a, const StageModel& b) {
  return a.deg1_converged && b.deg1_converged && a.complete && b.complete;
}

void check_functoriality(PersistentSullivanModel& psm) {
  psm.functorial = true;
  for (std::size_t s = 0; s + 1 < psm.representatives.size(); ++s) {
    const auto& r0 = psm.representatives[s];
    const auto& r1 = psm.representatives[s + 1];
    if (!r0 || !r1) continue;
    const bool ok = psm.direction == Direction::contravariant ? linear_parts_compose(*r1, *r0, psm.max_degree)
                                                              : linear_parts_compose(*r0, *r1, psm.max_degree);
    psm.functorial = psm.functorial && ok;
  }
}

}  // namespace

bool PersistentSullivanModel::all_converged() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageModel& s) { return s.deg1_converged; });
}

bool PersistentSullivanModel::all_complete() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageModel& s) { return s.complete; });
}

bool PersistentSullivanModel::any_h1_nonzero() const {
  return std::any_of(stages.begin(), stages.end(), [](const StageModel& s) { return s.h1_nonzero; });
}

std::vector<std::string> PersistentSullivanModel::caveats() const {
  std::vector<std::size_t> h1, open, partial, wedge, gaps;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    if (stages[s].h1_nonzero) h1.push_back(s);
    if (!stages[s].deg1_converged) open.push_back(s);
    if (!stages[s].complete) partial.push_back(s);
    if (stages[s].wedge_reduced) wedge.push_back(s);
  }
  for (std::size_t s = 0; s < representatives.size(); ++s)
    if (!representatives[s]) gaps.push_back(s);
  std::vector<std::string> out;
  if (!h1.empty())
    out.push_back("H^1 != 0 at stages " + stage_list(h1) +
                  ": V bars there are outside the simply connected setting");
  if (!open.empty()) out.push_back("degree-1 construction did not converge at stages " + stage_list(open));
  if (!partial.empty()) out.push_back("model truncated by the basis cap at stages " + stage_list(partial));
  if (!wedge.empty())
    out.push_back("stages " + stage_list(wedge) + " are disconnected; models use the wedge of the components");
  if (!gaps.empty())
    out.push_back("no representative between stages s and s+1 for s in " + stage_list(gaps) +
                  "; V maps there are zero");
  if (!functorial) out.push_back("linear parts of composite representatives disagree");
  return out;
}

PersistentSullivanModel persistent_model(const MetricSpace& m, const PipelineOptions& opts) {
  const int ring_top = opts.skeleton_dim();
  if (ring_top < 1) throw InputError("skeleton dimension must be at least 1");
  const int n = std::min(opts.max_degree, ring_top - 1);
  if (n < 0) throw InputError("max degree must be nonnegative");

  const FilteredComplex fc = build_filtration(m, ring_top, opts.simplex_cap);
  const std::size_t stages = fc.stage_count();

  std::vector<std::unique_ptr<ComplexCohomology>> coh(stages);
  parallel_for(stages, [&](std::size_t s) {
    coh[s] = std::make_unique<ComplexCohomology>(fc.stages[s], ring_top, true);
  });

  std::vector<std::vector<RatMatrix>> ring_maps(stages - 1);
  parallel_for(stages - 1, [&](std::size_t s) { ring_maps[s] = induced_ring_map(*coh[s + 1], *coh[s]); });

  PersistentSullivanModel psm;
  psm.grid = fc.critical_values;
  psm.direction = Direction::contravariant;
  psm.max_degree = n;
  psm.stages.resize(stages);
  parallel_for(stages, [&](std::size_t s) {
    const CohomologyRing& full = coh[s]->ring();
    const bool wedge = full.dims[0] > 1;
    MinimalModel mm = minimal_model(wedge ? wedge_reduction(full) : full, n, opts.model);
    std::vector<std::size_t> h(full.dims.begin(), full.dims.begin() + n + 1);
    psm.stages[s] = stage_from(std::move(mm), std::move(h), wedge);
  });

  psm.h_maps.resize(stages - 1);
  psm.representatives.resize(stages - 1);
  parallel_for(stages - 1, [&](std::size_t s) {
    psm.h_maps[s].assign(ring_maps[s].begin(), ring_maps[s].begin() + n + 1);
    if (!liftable(psm.stages[s + 1], psm.stages[s])) return;
    std::vector<RatMatrix> f = ring_maps[s];
    f[0] = RatMatrix{{1}};  // the unit of the (possibly wedge-reduced) ring
    psm.representatives[s] =
        sullivan_representative(f, psm.stages[s + 1].minimal, psm.stages[s].minimal, n);
  });
  check_functoriality(psm);
  return psm;
}

PersistentSullivanModel persistent_model(const PersistentCdga& a, const PipelineOptions& opts) {
  const int n = opts.max_degree;
  if (n < 0) throw InputError("max degree must be nonnegative");
  const std::size_t stages = a.stages.size();
  if (stages != a.grid.size() + 1) throw InputError("persistent CDGA needs one stage per grid cell");
  if (a.maps.size() + 1 != stages) throw InputError("persistent CDGA needs one map per consecutive pair");
  for (const auto& st : a.stages)
    if (st->top <= n) throw InputError("every stage must be known through degree " + std::to_string(n + 1));

  PersistentSullivanModel psm;
  psm.grid = a.grid;
  psm.direction = Direction::covariant;
  psm.max_degree = n;
  psm.stages.resize(stages);
  std::vector<std::unique_ptr<FiniteCohomology>> coh(stages);
  parallel_for(stages, [&](std::size_t s) {
    coh[s] = std::make_unique<FiniteCohomology>(*a.stages[s], n);
    if (coh[s]->dim(0) != 1) throw InputError("stage " + std::to_string(s) + " is not connected");
    std::vector<std::size_t> h;
    for (int k = 0; k <= n; ++k) h.push_back(coh[s]->dim(k));
    psm.stages[s] = stage_from(minimal_model(a.stages[s], n, opts.model), std::move(h), false);
  });

  psm.h_maps.resize(stages - 1);
  psm.representatives.resize(stages - 1);
  parallel_for(stages - 1, [&](std::size_t s) {
    for (int k = 0; k <= n; ++k) {
      RatMatrix m(coh[s + 1]->dim(k), coh[s]->dim(k));
      for (std::size_t c = 0; c < coh[s]->dim(k); ++c) {
        const RatVector img = a.maps[s][k].apply(coh[s]->representatives(k)[c]);
        if (!coh[s + 1]->is_cocycle(k, img))
          throw InputError("structure map " + std::to_string(s) + " does not commute with the differential");
        m.set_column(c, coh[s + 1]->coordinates(k, img));
      }
      psm.h_maps[s].push_back(std::move(m));
    }
    if (!liftable(psm.stages[s], psm.stages[s + 1])) return;
    psm.representatives[s] = sullivan_representative(a.maps[s], psm.stages[s].minimal, psm.stages[s + 1].minimal, n);
  });
  check_functoriality(psm);
  return psm;
}

PersistentGVec v_module(const PersistentSullivanModel& psm) {
  PersistentGVec p;
  p.grid = psm.grid;
  p.direction = psm.direction;
  p.max_degree = psm.max_degree;
  for (const auto& st : psm.stages) {
    std::vector<std::size_t> d;
    for (int k = 0; k <= psm.max_degree; ++k) d.push_back(generator_count(*st.model, k));
    p.dims.push_back(std::move(d));
  }
  const bool co = psm.direction == Direction::covariant;
  for (std::size_t s = 0; s < psm.representatives.size(); ++s) {
    std::vector<RatMatrix> q;
    if (psm.representatives[s]) q = linear_part_map(*psm.representatives[s]);
    std::vector<RatMatrix> row;
    for (int k = 0; k <= psm.max_degree; ++k) {
      const std::size_t src = co ? p.dims[s][k] : p.dims[s + 1][k];
      const std::size_t dst = co ? p.dims[s + 1][k] : p.dims[s][k];
      row.push_back(padded(q, k, dst, src));
    }
    p.maps.push_back(std::move(row));
  }
  p.validate();
  return p;
}

PersistentGVec h_module(const PersistentSullivanModel& psm) {
  PersistentGVec p;
  p.grid = psm.grid;
  p.direction = psm.direction;
  p.max_degree = psm.max_degree;
  for (const auto& st : psm.stages) p.dims.push_back(st.h_dims);
  p.maps = psm.h_maps;
  p.validate();
  return p;
}

Barcode v_barcode(const PersistentSullivanModel& psm) { return barcode(v_module(psm)); }
Barcode h_barcode(const PersistentSullivanModel& psm) { return barcode(h_module(psm)); }

Barcode h_barcode(const MetricSpace& m, const PipelineOptions& opts) {
  const int n = opts.max_degree;
  if (n < 0) throw InputError("max degree must be nonnegative");
  const FilteredComplex fc = build_filtration(m, n + 1, opts.simplex_cap);
  const std::size_t stages = fc.stage_count();
  std::vector<std::unique_ptr<ComplexCohomology>> coh(stages);
  parallel_for(stages, [&](std::size_t s) { coh[s] = std::make_unique<ComplexCohomology>(fc.stages[s], n); });
  PersistentGVec p;
  p.grid = fc.critical_values;
  p.direction = Direction::contravariant;
  p.max_degree = n;
  for (const auto& c : coh) p.dims.push_back(c->ring().dims);
  p.maps.resize(stages - 1);
  parallel_for(stages - 1, [&](std::size_t s) { p.maps[s] = induced_ring_map(*coh[s + 1], *coh[s]); });
  return barcode(p);
}

BoundsReport bounds_report(const PersistentSullivanModel& a, const PersistentSullivanModel& b,
                           std::optional<double> gh2, double slack) {
  BoundsReport r;
  r.dB_H = bottleneck(h_barcode(a), h_barcode(b));
  r.dB_V = bottleneck(v_barcode(a), v_barcode(b));
  for (const auto& [k, d] : r.dB_V.per_degree)
    if (k >= 2) r.dB_V_reliable = std::max(r.dB_V_reliable, d);
  r.gh2 = gh2;
  auto verdict = [&](std::string name, double lhs) {
    Verdict v{std::move(name), lhs, gh2, std::nullopt};
    if (gh2) v.holds = lhs <= *gh2 + slack;
    r.verdicts.push_back(std::move(v));
  };
  verdict("dB_H <= 2 d_GH", r.dB_H.sup);
  verdict("dB_V(deg >= 2) <= 2 d_GH", r.dB_V_reliable);
  for (const auto& c : a.caveats()) r.caveats.push_back("left: " + c);
  for (const auto& c : b.caveats()) r.caveats.push_back("right: " + c);
  if (a.any_h1_nonzero() || b.any_h1_nonzero())
    r.caveats.push_back("degree-1 V distances are reported but excluded from the verdicts");
  return r;
}

BoundsReport bounds_report(const MetricSpace& x, const MetricSpace& y, const PipelineOptions& opts, bool with_gh) {
  std::optional<double> gh2;
  std::string skipped;
  if (with_gh) {
    if (x.n * y.n <= opts.gh_cap)
      gh2 = 2 * gh_bruteforce(x, y, opts.gh_cap);
    else
      skipped = "2 d_GH omitted: |X|*|Y| = " + std::to_string(x.n * y.n) + " exceeds the cap " +
                std::to_string(opts.gh_cap);
  }
  BoundsReport r = bounds_report(persistent_model(x, opts), persistent_model(y, opts), gh2);
  if (!skipped.empty()) r.caveats.push_back(skipped);
  return r;
}

}  // namespace psmm
