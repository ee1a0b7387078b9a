#pragma once

// Free graded-commutative algebras with a differential, finite-dimensional
// truncations of them, morphisms and the linear-part functor.

#include "psmm/cohomology.hpp"
#include "psmm/ratlin.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace psmm {

/// Exponent vector over the canonical generator order with trailing zeros
/// removed; odd generators have exponent 0 or 1.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Rational>;

struct Generator {
  std::string name;
  int degree = 0;
};

/// One term of a differential as written in an input file: the listed
/// generators are multiplied left to right.
struct WordTerm {
  Rational coeff;
  std::vector<std::string> word;
};

struct GradedVectorSpace {
  std::vector<std::size_t> dims;  // index = degree
  std::vector<std::vector<std::string>> labels;

  std::size_t dim(int k) const { return k >= 0 && k < static_cast<int>(dims.size()) ? dims[k] : 0; }
};

class SullivanAlgebra {
 public:
  SullivanAlgebra() = default;

  /// Validates and canonicalizes. Throws InputError on a generator of degree
  /// < 1, a duplicate or unknown name, an odd generator squared in a listed
  /// word, a differential of the wrong degree, or a nonzero square of the
  /// differential on a generator.
  static SullivanAlgebra make(std::vector<Generator> generators,
                              const std::map<std::string, std::vector<WordTerm>>& differential,
                              int truncation);
  /// Same checks for data already in canonical form; generators must be
  /// sorted by (degree, name).
  static SullivanAlgebra from_canonical(std::vector<Generator> generators, std::vector<Polynomial> differential,
                                        int truncation);

  /// Appends a generator that sorts after all existing ones; existing
  /// monomials keep their meaning.
  SullivanAlgebra with_generator(Generator g, Polynomial d) const;
  SullivanAlgebra with_truncation(int truncation) const;

  const std::vector<Generator>& generators() const { return gens_; }
  std::size_t generator_count() const { return gens_.size(); }
  std::optional<std::size_t> generator_index(const std::string& name) const;
  const Polynomial& differential(std::size_t gen) const { return diff_[gen]; }
  int truncation() const { return truncation_; }

  int degree(const Monomial& m) const;
  int word_length(const Monomial& m) const;
  Monomial generator_monomial(std::size_t gen) const;
  Polynomial generator_poly(std::size_t gen) const { return {{generator_monomial(gen), Rational(1)}}; }

  /// Product m1*m2 in canonical form: sign and monomial, or nullopt when an
  /// odd generator would appear twice.
  std::optional<std::pair<int, Monomial>> multiply(const Monomial& a, const Monomial& b) const;
  Polynomial multiply(const Polynomial& a, const Polynomial& b) const;
  Polynomial d(const Polynomial& p) const;
  Polynomial d(const Monomial& m) const;

  /// Canonical monomials of total degree deg in ascending exponent-vector
  /// order. Throws DimensionError beyond the truncation degree.
  std::vector<Monomial> monomial_basis(int deg) const;
  /// Number of monomials of degree deg, without materializing them.
  std::size_t monomial_count(int deg) const;

  std::string format(const Polynomial& p) const;

 private:
  void validate() const;

  std::vector<Generator> gens_;
  std::vector<Polynomial> diff_;
  int truncation_ = 0;
};

void add_to(Polynomial& acc, const Polynomial& p, const Rational& factor = 1);
Polynomial scaled(const Polynomial& p, const Rational& factor);
bool is_zero(const Polynomial& p);

/// Degree-wise finite algebra: basis dims in degrees 0..top, differentials
/// between consecutive degrees and products of basis elements.
struct FiniteCdga {
  int top = 0;
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> d;  // d[k]: dims[k+1] x dims[k], k < top
  std::function<RatVector(int, std::size_t, int, std::size_t)> basis_product;
  RatVector unit;

  std::size_t dim(int k) const { return k >= 0 && k <= top ? dims[k] : 0; }
  /// Differential on degree k; the zero map out of the top degree.
  RatVector apply_d(int k, const RatVector& x) const;
  RatVector multiply(int p, const RatVector& x, int q, const RatVector& y) const;
};

/// Basis bookkeeping for a Sullivan algebra truncated at `top`.
class SullivanTruncation {
 public:
  SullivanTruncation(const SullivanAlgebra& alg, int top);

  int top() const { return top_; }
  const std::vector<Monomial>& basis(int k) const { return bases_[k]; }
  std::optional<std::size_t> index_of(int k, const Monomial& m) const;
  RatVector to_vector(int k, const Polynomial& p) const;
  Polynomial to_poly(int k, const RatVector& v) const;
  const FiniteCdga& cdga() const { return cdga_; }

 private:
  int top_;
  std::vector<std::vector<Monomial>> bases_;
  std::vector<std::map<Monomial, std::size_t>> index_;
  FiniteCdga cdga_;
};

/// The ring as an algebra with zero differential.
FiniteCdga formal_cdga(const CohomologyRing& r);

/// Cohomology of a finite algebra through max_deg with a coordinate map.
class FiniteCohomology {
 public:
  FiniteCohomology(const FiniteCdga& a, int max_deg);

  int max_deg() const { return max_deg_; }
  std::size_t dim(int k) const { return reps_[k].size(); }
  const std::vector<RatVector>& representatives(int k) const { return reps_[k]; }
  /// Class coordinates of a cocycle; throws std::logic_error otherwise.
  RatVector coordinates(int k, const RatVector& cocycle) const;
  bool is_cocycle(int k, const RatVector& x) const;
  bool is_coboundary(int k, const RatVector& x) const;
  /// Some y with d y = x, or nullopt.
  std::optional<RatVector> primitive(int k, const RatVector& x) const;

 private:
  int top_;
  int max_deg_;
  std::vector<RatMatrix> d_;  // d[k] for k <= max_deg below the top
  std::vector<std::vector<RatVector>> reps_;
  std::vector<SpanSolver> boundary_solvers_;  // columns of d[k-1]
  std::vector<SpanSolver> class_solvers_;     // boundaries followed by reps
  std::vector<std::size_t> boundary_cols_;
};

struct CdgaCohomology {
  GradedVectorSpace space;
  std::vector<std::vector<Polynomial>> representatives;
};

/// H^k(alg) for k <= max_deg; needs max_deg < truncation.
CdgaCohomology cdga_cohomology(const SullivanAlgebra& alg, int max_deg);

struct LinearPart {
  GradedVectorSpace v;
  std::vector<RatMatrix> q_d;  // q_d[k]: V^(k+1) x V^k
};

/// Indecomposables V with the word-length-one part of the differential.
LinearPart linear_part(const SullivanAlgebra& alg);
/// True iff the linear part of the differential vanishes.
bool is_minimal(const SullivanAlgebra& alg);
/// Independent formulation: every monomial of every differential has word
/// length at least two.
bool differential_is_decomposable(const SullivanAlgebra& alg);

/// Generator-wise morphism of Sullivan algebras.
struct CdgaMorphism {
  std::shared_ptr<const SullivanAlgebra> source;
  std::shared_ptr<const SullivanAlgebra> target;
  std::vector<Polynomial> images;  // one per source generator

  Polynomial apply(const Polynomial& p) const;
};

CdgaMorphism identity_morphism(std::shared_ptr<const SullivanAlgebra> alg);
CdgaMorphism compose(const CdgaMorphism& second, const CdgaMorphism& first);
/// Throws InputError unless degrees are preserved and d commutes with the map.
void validate_morphism(const CdgaMorphism& f);

/// Per degree k, the matrix from generators of degree k of the source to
/// generators of degree k of the target.
std::vector<RatMatrix> linear_part_map(const CdgaMorphism& f);
/// Per degree k <= max_deg, the induced map on cohomology bases.
std::vector<RatMatrix> cohomology_map(const CdgaMorphism& f, int max_deg);

struct HomotopyCheck {
  bool cohomology_equal = false;
  bool linear_part_equal = false;
  bool source_h1_zero = false;
  bool passes() const { return cohomology_equal && linear_part_equal; }
};

/// Necessary conditions for f0 ~ f1 when H^1 of the source vanishes.
HomotopyCheck check_homotopy_necessary(const CdgaMorphism& f0, const CdgaMorphism& f1, int max_deg);

}  // namespace psmm
