#pragma once

// End-to-end construction: filtration, per-stage cohomology rings, persistent
// minimal models, V and H barcodes and the distance bracket between inputs.

#include "psmm/cdga.hpp"
#include "psmm/cohomology.hpp"
#include "psmm/metric_vr.hpp"
#include "psmm/minmodel.hpp"
#include "psmm/persistence.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace psmm {

struct PipelineOptions {
  int max_degree = 4;  // model and barcode degrees 0..max_degree
  int max_dim = -1;    // VR skeleton dimension; max_degree + 1 when negative
  std::size_t simplex_cap = kDefaultSimplexCap;
  std::size_t gh_cap = kDefaultGhCap;
  ModelOptions model;

  int skeleton_dim() const { return max_dim < 0 ? max_degree + 1 : max_dim; }
};

struct StageModel {
  std::shared_ptr<const SullivanAlgebra> model;
  MinimalModel minimal;  // input and rho absent for reloaded dumps
  std::vector<std::size_t> h_dims;  // H^k for k <= max_degree; H^0 counts components
  bool wedge_reduced = false;       // model built from the wedge of the components
  bool h1_nonzero = false;
  bool deg1_converged = true;
  bool complete = true;
  int verified_degree = -1;
};

/// Stage models joined by representatives of the structure maps. For metric
/// input the direction is contravariant: representatives[s] goes from the
/// model of stage s+1 to the model of stage s.
struct PersistentSullivanModel {
  std::vector<double> grid;
  Direction direction = Direction::contravariant;
  int max_degree = 0;
  std::vector<StageModel> stages;
  std::vector<std::optional<CdgaMorphism>> representatives;
  std::vector<std::vector<RatMatrix>> h_maps;  // [s][k], same direction as representatives
  bool functorial = true;                      // Q applied to composites agrees

  bool all_converged() const;
  bool all_complete() const;
  bool any_h1_nonzero() const;
  std::vector<std::string> caveats() const;
};

/// Persistent CDGA given stagewise, with maps from stage s to stage s+1.
struct PersistentCdga {
  std::vector<double> grid;
  std::vector<std::shared_ptr<const FiniteCdga>> stages;
  std::vector<std::vector<RatMatrix>> maps;  // [s][k] for k = 0..min top
};

PersistentSullivanModel persistent_model(const MetricSpace& m, const PipelineOptions& opts = {});
PersistentSullivanModel persistent_model(const PersistentCdga& a, const PipelineOptions& opts = {});

PersistentGVec v_module(const PersistentSullivanModel& psm);
PersistentGVec h_module(const PersistentSullivanModel& psm);
Barcode v_barcode(const PersistentSullivanModel& psm);
Barcode h_barcode(const PersistentSullivanModel& psm);
/// Persistent cohomology barcode without building models.
Barcode h_barcode(const MetricSpace& m, const PipelineOptions& opts = {});

struct Verdict {
  std::string name;
  double lhs = 0;
  std::optional<double> rhs;
  std::optional<bool> holds;  // absent without an upper bound
};

struct BoundsReport {
  Bottleneck dB_H;
  Bottleneck dB_V;
  double dB_V_reliable = 0;  // sup over degrees >= 2
  std::optional<double> gh2;
  std::vector<Verdict> verdicts;
  std::vector<std::string> caveats;

  double lower_bound() const { return std::max(dB_H.sup, dB_V_reliable); }
};

/// Verdicts allow `slack` of floating error.
BoundsReport bounds_report(const PersistentSullivanModel& a, const PersistentSullivanModel& b,
                           std::optional<double> gh2 = std::nullopt, double slack = 1e-9);
/// Adds gh2 = 2 d_GH when with_gh is set and |x| |y| <= opts.gh_cap; a
/// caveat records a skipped computation.
BoundsReport bounds_report(const MetricSpace& x, const MetricSpace& y, const PipelineOptions& opts = {},
                           bool with_gh = false);

}  // namespace psmm
