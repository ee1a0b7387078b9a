#pragma once

// Exact linear algebra over Q. Every result is exact; there is no floating
// point anywhere in this module.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psmm {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of rationals in lowest terms.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_columns(std::size_t rows, const std::vector<RatVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatVector column(std::size_t c) const;
  void set_column(std::size_t c, const RatVector& v);
  std::vector<RatVector> columns() const;

  bool is_zero() const;
  RatMatrix transposed() const;
  RatVector apply(const RatVector& x) const;

  /// [this | other]; row counts must agree.
  RatMatrix hcat(const RatMatrix& other) const;
  RatMatrix select_columns(const std::vector<std::size_t>& idx) const;

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank = 0;
};

RrefResult rref(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

/// Some x with a*x == b, or nullopt when b is outside the column space.
/// Free variables are set to zero, so the answer is deterministic.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

/// Columns spanning the null space, one per free column of rref(a).
RatMatrix kernel_basis(const RatMatrix& a);

/// Indices of columns of `vectors` forming a basis of
/// (span(vectors) + span(subspace)) / span(subspace), chosen greedily left to
/// right.
std::vector<std::size_t> quotient_basis(std::size_t ambient_dim, const RatMatrix& subspace,
                                        const RatMatrix& vectors);

/// Incrementally maintained echelon basis of a subspace of Q^n.
/// Stored vectors are kept fully reduced against each other's pivots.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t ambient_dim) : dim_(ambient_dim) {}

  std::size_t ambient_dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

  /// Reduces v against the basis in place; returns true if it became zero.
  bool reduce(RatVector& v) const;
  bool contains(RatVector v) const { return reduce(v); }
  /// Adds v if independent; returns whether it was added.
  bool insert(RatVector v);

 private:
  std::size_t dim_;
  std::vector<RatVector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Expresses vectors as combinations of a fixed, possibly dependent, list of
/// generators of a subspace.
class SpanSolver {
 public:
  SpanSolver(std::size_t ambient_dim, const std::vector<RatVector>& generators);

  std::size_t rank() const { return rows_.size(); }
  std::size_t generator_count() const { return count_; }
  /// Coefficients c with sum c_i g_i = v, or nullopt outside the span.
  /// Coefficients of redundant generators are zero.
  std::optional<RatVector> express(const RatVector& v) const;

 private:
  std::size_t dim_;
  std::size_t count_;
  std::vector<RatVector> rows_;    // each row vanishes at earlier pivots
  std::vector<RatVector> combos_;  // row i = sum combos_[i][j] g_j
  std::vector<std::size_t> pivots_;
};

bool is_zero(const RatVector& v);
RatVector zero_vector(std::size_t n);

/// Parses "p/q", "p" or "-p/q". Non-reduced forms are accepted and normalised.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

}  // namespace psmm
