#include "psmm/ratlin.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace psmm {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    for (long v : row) data_.emplace_back(v);
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_columns(std::size_t rows, const std::vector<RatVector>& columns) {
  RatMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

RatVector RatMatrix::column(std::size_t c) const {
  RatVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void RatMatrix::set_column(std::size_t c, const RatVector& v) {
  if (v.size() != rows_) throw DimensionError("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

std::vector<RatVector> RatMatrix::columns() const {
  std::vector<RatVector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

RatMatrix RatMatrix::transposed() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatVector RatMatrix::apply(const RatVector& x) const {
  if (x.size() != cols_) throw DimensionError("apply: vector length mismatch");
  RatVector y(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (sgn(x[c]) == 0) continue;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& a = (*this)(r, c);
      if (sgn(a) != 0) y[r] += a * x[c];
    }
  }
  return y;
}

RatMatrix RatMatrix::hcat(const RatMatrix& other) const {
  if (other.rows_ != rows_) throw DimensionError("hcat: row count mismatch");
  RatMatrix m(rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < other.cols_; ++c) m(r, cols_ + c) = other(r, c);
  }
  return m;
}

RatMatrix RatMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  RatMatrix m(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t r = 0; r < rows_; ++r) m(r, j) = (*this)(r, idx[j]);
  return m;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimension mismatch");
  RatMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rational& y = b(k, j);
        if (sgn(y) != 0) m(i, j) += x * y;
      }
    }
  return m;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string RatMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

RrefResult rref(const RatMatrix& m) {
  RrefResult out;
  out.reduced = m;
  RatMatrix& a = out.reduced;
  const std::size_t rows = a.rows(), cols = a.cols();

  std::vector<std::size_t> row_weight(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (sgn(a(r, c)) != 0) ++row_weight[r];

  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    // sparsest candidate row as pivot; the reduced form does not depend on it
    std::size_t best = rows;
    for (std::size_t r = lead; r < rows; ++r)
      if (sgn(a(r, c)) != 0 && (best == rows || row_weight[r] < row_weight[best])) best = r;
    if (best == rows) continue;
    if (best != lead) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(best, j), a(lead, j));
      std::swap(row_weight[best], row_weight[lead]);
    }
    const Rational inv = 1 / a(lead, c);
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(a(lead, j)) != 0) a(lead, j) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == lead || sgn(a(r, c)) == 0) continue;
      const Rational f = a(r, c);
      std::size_t w = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        if (j >= c && sgn(a(lead, j)) != 0) a(r, j) -= f * a(lead, j);
        if (sgn(a(r, j)) != 0) ++w;
      }
      row_weight[r] = w;
    }
    out.pivot_columns.push_back(c);
    ++lead;
  }
  out.rank = out.pivot_columns.size();
  return out;
}

std::size_t rank(const RatMatrix& m) {
  if (m.empty()) return 0;
  return rref(m).rank;
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (b.size() != a.rows()) throw DimensionError("solve: right-hand side length mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  const RrefResult rr = rref(aug);
  RatVector x(a.cols());
  for (std::size_t i = 0; i < rr.rank; ++i) {
    const std::size_t pc = rr.pivot_columns[i];
    if (pc == a.cols()) return std::nullopt;
    x[pc] = rr.reduced(i, a.cols());
  }
  return x;
}

RatMatrix kernel_basis(const RatMatrix& a) {
  const RrefResult rr = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t pc : rr.pivot_columns) is_pivot[pc] = true;
  std::vector<RatVector> cols;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < rr.rank; ++i) v[rr.pivot_columns[i]] = -rr.reduced(i, f);
    cols.push_back(std::move(v));
  }
  return RatMatrix::from_columns(a.cols(), cols);
}

std::vector<std::size_t> quotient_basis(std::size_t ambient_dim, const RatMatrix& subspace,
                                        const RatMatrix& vectors) {
  if (subspace.cols() > 0 && subspace.rows() != ambient_dim)
    throw DimensionError("quotient_basis: subspace lives in a different ambient space");
  if (vectors.cols() > 0 && vectors.rows() != ambient_dim)
    throw DimensionError("quotient_basis: vectors live in a different ambient space");
  EchelonBasis eb(ambient_dim);
  for (std::size_t c = 0; c < subspace.cols(); ++c) eb.insert(subspace.column(c));
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < vectors.cols(); ++c)
    if (eb.insert(vectors.column(c))) picked.push_back(c);
  return picked;
}

bool EchelonBasis::reduce(RatVector& v) const {
  if (v.size() != dim_) throw DimensionError("EchelonBasis: vector length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t p = pivots_[i];
    if (sgn(v[p]) == 0) continue;
    const Rational f = v[p];
    const RatVector& row = rows_[i];
    for (std::size_t j = 0; j < dim_; ++j)
      if (sgn(row[j]) != 0) v[j] -= f * row[j];
  }
  return is_zero(v);
}

bool EchelonBasis::insert(RatVector v) {
  if (reduce(v)) return false;
  std::size_t p = 0;
  while (sgn(v[p]) == 0) ++p;
  const Rational inv = 1 / v[p];
  for (auto& x : v)
    if (sgn(x) != 0) x *= inv;
  // keep existing rows reduced against the new pivot
  for (auto& row : rows_) {
    if (sgn(row[p]) == 0) continue;
    const Rational f = row[p];
    for (std::size_t j = 0; j < dim_; ++j)
      if (sgn(v[j]) != 0) row[j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

SpanSolver::SpanSolver(std::size_t ambient_dim, const std::vector<RatVector>& generators)
    : dim_(ambient_dim), count_(generators.size()) {
  for (std::size_t g = 0; g < generators.size(); ++g) {
    RatVector v = generators[g];
    if (v.size() != dim_) throw DimensionError("SpanSolver: generator length mismatch");
    RatVector combo(count_);
    combo[g] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if (sgn(v[p]) == 0) continue;
      const Rational f = v[p];
      for (std::size_t j = 0; j < dim_; ++j)
        if (sgn(rows_[i][j]) != 0) v[j] -= f * rows_[i][j];
      for (std::size_t j = 0; j < count_; ++j)
        if (sgn(combos_[i][j]) != 0) combo[j] -= f * combos_[i][j];
    }
    std::size_t p = 0;
    while (p < dim_ && sgn(v[p]) == 0) ++p;
    if (p == dim_) continue;
    const Rational inv = 1 / v[p];
    for (auto& x : v)
      if (sgn(x) != 0) x *= inv;
    for (auto& x : combo)
      if (sgn(x) != 0) x *= inv;
    rows_.push_back(std::move(v));
    combos_.push_back(std::move(combo));
    pivots_.push_back(p);
  }
}

std::optional<RatVector> SpanSolver::express(const RatVector& target) const {
  if (target.size() != dim_) throw DimensionError("SpanSolver: vector length mismatch");
  RatVector v = target;
  RatVector c(count_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t p = pivots_[i];
    if (sgn(v[p]) == 0) continue;
    const Rational f = v[p];
    for (std::size_t j = 0; j < dim_; ++j)
      if (sgn(rows_[i][j]) != 0) v[j] -= f * rows_[i][j];
    for (std::size_t j = 0; j < count_; ++j)
      if (sgn(combos_[i][j]) != 0) c[j] += f * combos_[i][j];
  }
  if (!is_zero(v)) return std::nullopt;
  return c;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

RatVector zero_vector(std::size_t n) { return RatVector(n); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return t[0] == '+' ? t.substr(1) : t; };
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw std::invalid_argument("malformed rational literal: " + s);
    return Rational(mpz_class(strip_plus(s)));
  }
  const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (num.empty() || den.empty() || !valid_int(num) || !valid_int(den) || den[0] == '-')
    throw std::invalid_argument("malformed rational literal: " + s);
  mpz_class d(strip_plus(den));
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  Rational q(mpz_class(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

}  // namespace psmm
