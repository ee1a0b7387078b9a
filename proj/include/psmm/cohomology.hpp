#pragma once

// Rational simplicial cohomology, Alexander-Whitney cup products and the
// maps induced by inclusions of complexes.

#include "psmm/metric_vr.hpp"
#include "psmm/ratlin.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace psmm {

/// Sparse cochain: (simplex index, value) pairs sorted by index, no zeros.
using SparseCochain = std::vector<std::pair<std::size_t, Rational>>;

SparseCochain to_sparse(const RatVector& v);
RatVector to_dense(const SparseCochain& v, std::size_t n);

/// Graded ring with a finite basis in each degree 0..max_deg and products
/// given by structure constants. Representatives are present only for rings
/// computed from a complex.
struct CohomologyRing {
  int max_deg = 0;
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<SparseCochain>> representatives;
  RatVector unit;  // coordinates of 1 in degree 0
  /// table[p][q] has dims[p+q] rows and dims[p]*dims[q] columns; column
  /// i*dims[q]+j holds e_i * e_j. Defined for p+q <= max_deg.
  std::vector<std::vector<RatMatrix>> table;
  /// When set, the top degree holds only the span of products, not all of H.
  bool top_decomposable_only = false;

  std::size_t dim(int k) const { return k >= 0 && k <= max_deg ? dims[k] : 0; }
  RatVector product(int p, std::size_t i, int q, std::size_t j) const;
  RatVector multiply(int p, const RatVector& x, int q, const RatVector& y) const;

  /// Ring with the given dims and an all-zero product table; degree 0 must be
  /// filled in by the caller.
  static CohomologyRing empty(int max_deg, std::vector<std::size_t> dims);
};

bool is_graded_commutative(const CohomologyRing& r);
bool is_associative(const CohomologyRing& r);
bool unit_acts_trivially(const CohomologyRing& r);

/// Replaces H^0 by the span of the unit; positive degrees and their products
/// are kept. For a disjoint union this is the ring of the wedge of the
/// components.
CohomologyRing wedge_reduction(const CohomologyRing& r);

/// Dense coboundary matrices delta^0..delta^max_deg; delta^k has
/// count(k+1) rows and count(k) columns.
std::vector<RatMatrix> coboundaries(const SimplicialComplex& k, int max_deg);

/// Alexander-Whitney product of a p-cochain and a q-cochain.
RatVector cup_product(const SimplicialComplex& k, int p, const RatVector& a, int q, const RatVector& b);
SparseCochain cup_product(const SimplicialComplex& k, int p, const SparseCochain& a, int q,
                          const SparseCochain& b);

/// Cohomology of one complex through max_deg together with the data needed to
/// express arbitrary cocycles in the chosen basis.
class ComplexCohomology {
 public:
  ComplexCohomology(const SimplicialComplex& k, int max_deg, bool top_decomposable_only = false);
  ~ComplexCohomology();
  ComplexCohomology(ComplexCohomology&&) noexcept;
  ComplexCohomology& operator=(ComplexCohomology&&) noexcept;

  const SimplicialComplex& complex() const { return *complex_; }
  const CohomologyRing& ring() const { return ring_; }

  /// Coordinates of the class of a cocycle; throws std::logic_error when the
  /// argument is not a cocycle (or, in a decomposable-only top degree, not
  /// congruent to a combination of products).
  RatVector coordinates(int deg, const SparseCochain& cocycle) const;

 private:
  struct Reducers;
  const SimplicialComplex* complex_;
  CohomologyRing ring_;
  std::unique_ptr<Reducers> reducers_;
};

/// Basis of ker delta^deg / im delta^(deg-1) as dense representative cocycles.
std::vector<RatVector> cohomology_basis(const SimplicialComplex& k, int deg);

CohomologyRing cohomology_ring(const SimplicialComplex& k, int max_deg);

/// Restriction H*(big) -> H*(small) for small a subcomplex of big; one matrix
/// per degree with small.dim(k) rows and big.dim(k) columns.
std::vector<RatMatrix> induced_ring_map(const ComplexCohomology& big, const ComplexCohomology& small);

/// Checks f(e_i e_j) = f(e_i) f(e_j) on all basis pairs within truncation.
bool is_multiplicative(const std::vector<RatMatrix>& f, const CohomologyRing& source,
                       const CohomologyRing& target);

}  // namespace psmm
