#pragma once

// Degree-truncated Sullivan minimal models of finite algebras and lifts of
// algebra maps to maps between models.

#include "psmm/cdga.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace psmm {

/// Raised when a linear system that must be solvable is not; indicates a
/// truncation that is too small or a broken invariant.
class LiftingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  int deg1_cap = 8;
  /// Largest monomial basis materialized in any degree; exceeding it stops
  /// the construction and marks it incomplete.
  std::size_t basis_cap = 4000;
  /// Passes per degree while degree-1 generators exist.
  int pass_cap = 8;
};

struct QuasiIsoReport {
  std::vector<std::size_t> model_dims;
  std::vector<std::size_t> input_dims;
  std::vector<std::size_t> ranks;
  int verified_degree = -1;
};

struct MinimalModel {
  std::shared_ptr<const SullivanAlgebra> model;
  std::shared_ptr<const FiniteCdga> input;
  std::vector<RatVector> rho;  // per generator, coordinates in the input degree
  int degree = 0;              // generators constructed through this degree
  bool h1_nonzero = false;
  bool deg1_converged = true;
  bool complete = true;  // false when a cap stopped the construction
  int deg1_iterations = 0;
  QuasiIsoReport report;

  int verified_degree() const { return report.verified_degree; }
};

/// Model through degree n of a connected finite algebra; needs a.top > n.
MinimalModel minimal_model(std::shared_ptr<const FiniteCdga> a, int n, const ModelOptions& opts = {});
MinimalModel minimal_model(const CohomologyRing& r, int n, const ModelOptions& opts = {});
MinimalModel minimal_model(const SullivanAlgebra& alg, int n, const ModelOptions& opts = {});

/// Image of a model element under rho, in the input basis of degree k.
RatVector apply_rho(const MinimalModel& mm, int k, const Polynomial& p);

/// Per-degree dims of H(model), H(input) and rank of H(rho) for k <= max_deg.
QuasiIsoReport verify_quasi_iso(const MinimalModel& mm, int max_deg);

/// Lift of f: A -> B (one matrix per degree 0..min top) to a map of models
/// with H(rho_B o phi) = H(f o rho_A) through max_deg. Throws LiftingError
/// when no lift exists within the truncation.
CdgaMorphism sullivan_representative(const std::vector<RatMatrix>& f, const MinimalModel& a,
                                     const MinimalModel& b, int max_deg);

/// Checks H(rho_B o phi) = H(f o rho_A) through max_deg.
bool representative_contract_holds(const CdgaMorphism& phi, const std::vector<RatMatrix>& f,
                                   const MinimalModel& a, const MinimalModel& b, int max_deg);

}  // namespace psmm
