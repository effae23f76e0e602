#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mbrisk/model.hpp"

namespace mbrisk {

using Exponents = std::vector<int>;

/// Set of retained monomials of a truncated multivariate power series:
/// total degree <= `degree()` and, per variable v, exponent <= `caps()[v]`.
/// Both constraints describe a down-closed set of monomials, so the truncated
/// ring operations are exact on every retained coefficient.
///
/// Coefficients are stored densely over the box prod(cap_v + 1) in mixed
/// radix with variable 0 varying fastest; slots above the total degree stay 0.
class Truncation {
 public:
  /// All monomials of total degree <= degree in n_vars variables.
  static std::shared_ptr<const Truncation> total_degree(std::size_t n_vars, int degree);
  /// Monomials below `caps` componentwise with total degree <= degree.
  static std::shared_ptr<const Truncation> box(Exponents caps, int degree);

  std::size_t n_vars() const { return caps_.size(); }
  int degree() const { return degree_; }
  const Exponents& caps() const { return caps_; }

  /// Number of storage slots (the box size).
  std::size_t slots() const { return slots_; }
  /// Slots whose monomial has total degree <= degree(), in increasing degree.
  const std::vector<std::size_t>& live() const { return live_; }

  bool contains(std::span<const int> e) const;
  std::size_t index_of(std::span<const int> e) const;
  std::span<const int> exponents(std::size_t slot) const {
    return {exps_.data() + slot * caps_.size(), caps_.size()};
  }
  int degree_of(std::size_t slot) const { return degrees_[slot]; }
  std::size_t stride(std::size_t var) const { return strides_[var]; }

  /// True when both describe the same monomial set.
  friend bool operator==(const Truncation& a, const Truncation& b) {
    return a.degree_ == b.degree_ && a.caps_ == b.caps_;
  }

 private:
  Truncation(Exponents caps, int degree);

  Exponents caps_;
  int degree_;
  std::size_t slots_ = 1;
  std::vector<std::size_t> strides_;
  std::vector<int> exps_;
  std::vector<int> degrees_;
  std::vector<std::size_t> live_;
};

using TruncationPtr = std::shared_ptr<const Truncation>;

/// Truncated multivariate formal power series with real coefficients.
/// Binary operations require operands with equal truncations and throw
/// ValidationError ("degree mismatch") otherwise.
class MultiSeries {
 public:
  explicit MultiSeries(TruncationPtr trunc);

  static MultiSeries constant(TruncationPtr trunc, double c);
  /// coeff * x_var (the zero series if the monomial is truncated away).
  static MultiSeries variable(TruncationPtr trunc, std::size_t var, double coeff = 1.0);
  static MultiSeries monomial(TruncationPtr trunc, std::span<const int> e, double coeff = 1.0);

  const TruncationPtr& truncation() const { return trunc_; }
  int degree() const { return trunc_->degree(); }
  std::size_t n_vars() const { return trunc_->n_vars(); }

  /// Zero for monomials outside the truncation.
  double coeff(std::span<const int> e) const;
  double coeff_at(std::size_t slot) const { return c_[slot]; }
  double constant_term() const { return c_[0]; }
  void set_coeff(std::span<const int> e, double value);

  bool is_zero() const;
  /// Retained (exponent, coefficient) pairs with non-zero coefficient.
  std::vector<std::pair<Exponents, double>> terms() const;

  MultiSeries& operator+=(const MultiSeries& rhs);
  MultiSeries& operator-=(const MultiSeries& rhs);
  MultiSeries& operator*=(double s);
  MultiSeries operator-() const;

  friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
  friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
  friend MultiSeries operator*(MultiSeries a, double s) { return a *= s; }
  friend MultiSeries operator*(double s, MultiSeries a) { return a *= s; }
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);

  /// d/dx_var. Coefficients of the result at the top total degree (and at
  /// the cap of `var`) would need truncated terms and are left at zero.
  MultiSeries derive(std::size_t var) const;

  /// x_var * this
  MultiSeries shift(std::size_t var) const;

  /// Multiplicative inverse; throws ComputationError("series not invertible")
  /// when the constant term is zero.
  MultiSeries inverse() const;

  MultiSeries pow(unsigned k) const;

  /// Projection onto a smaller truncation (monomial set must be a subset).
  MultiSeries restricted(TruncationPtr target) const;

  /// sum_{e} this[e] * other[top - e] where `top` is the truncation's
  /// box corner: the coefficient of the cap monomial in this * other.
  double top_coefficient_of_product(const MultiSeries& other) const;

 private:
  void require_same(const MultiSeries& other) const;

  TruncationPtr trunc_;
  std::vector<double> c_;
};

MultiSeries add(const MultiSeries& a, const MultiSeries& b);
MultiSeries mul(const MultiSeries& a, const MultiSeries& b);
MultiSeries scale(const MultiSeries& a, double s);
MultiSeries derive(const MultiSeries& s, std::size_t var);
/// num / den; throws ComputationError("series not invertible") for a
/// non-unit denominator.
MultiSeries div(const MultiSeries& num, const MultiSeries& den);

/// Max absolute coefficient difference (operands must share a truncation).
double max_abs_diff(const MultiSeries& a, const MultiSeries& b);

/// Dense matrix of series sharing one truncation.
class SeriesMatrix {
 public:
  SeriesMatrix(std::size_t rows, std::size_t cols, TruncationPtr trunc);

  static SeriesMatrix identity(std::size_t n, TruncationPtr trunc);
  /// Constant matrix.
  static SeriesMatrix from_matrix(const Matrix& m, TruncationPtr trunc);
  /// The n x n matrix whose (i,j) entry is the variable x_{i*n+j}.
  static SeriesMatrix variables(std::size_t n, TruncationPtr trunc);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const TruncationPtr& truncation() const { return trunc_; }

  MultiSeries& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const MultiSeries& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Constant terms as a real matrix.
  Matrix constant_terms() const;

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator*(const Matrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator*(const SeriesMatrix& a, const Matrix& b);
  friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
  SeriesMatrix& operator+=(const SeriesMatrix& rhs);

 private:
  std::size_t rows_;
  std::size_t cols_;
  TruncationPtr trunc_;
  std::vector<MultiSeries> data_;
};

/// Determinant by Gaussian elimination over the truncated ring, pivoting on
/// entries with the largest constant term. If some column has no unit entry
/// left the routine falls back to cofactor expansion (at most 8x8), and
/// otherwise throws ComputationError.
MultiSeries det_series(SeriesMatrix m);

/// Which side the matrix argument multiplies the claim kernel from.
enum class Acting {
  kRight,  ///< sum_m Lambda(m) G^m  (drives the upper hitting times, G_v)
  kLeft,   ///< sum_m G^m Lambda(m)  (drives the reversed process, R_v)
};

/// Symbolic probability generating matrix of the claim kernel with the N x N
/// variable matrix G substituted, together with its partial derivatives
/// d/dG_kl. Partials are computed from the product rule on G^m, so they are
/// exact on the whole truncation.
class PgfExpansion {
 public:
  PgfExpansion(const MatrixSeq& claims, Acting acting, TruncationPtr trunc);

  std::size_t n_states() const { return n_; }
  Acting acting() const { return acting_; }
  const TruncationPtr& truncation() const { return trunc_; }

  const SeriesMatrix& value() const { return value_; }
  /// Partial derivative w.r.t. G_kl where var = k*N + l.
  SeriesMatrix partial(std::size_t var) const;

 private:
  std::size_t n_;
  Acting acting_;
  TruncationPtr trunc_;
  std::vector<std::pair<std::size_t, Matrix>> kernel_;
  std::vector<SeriesMatrix> powers_;  // G^0 .. G^r
  SeriesMatrix value_;
};

/// Entry (i,j) is the series (sum_m Lambda(m) G^m)_{ij} (kRight) or
/// (sum_m G^m Lambda(m))_{ij} (kLeft), truncated at total degree `degree`.
SeriesMatrix symbolic_pgf(const ModelSpec& spec, Acting acting, int degree);

/// N^2 x N^2 matrix gamma_{(ij),(kl)} = G_ij * (d/dG_kl pgf_ij) / pgf_ij,
/// i.e. G_ij times the partial of log pgf_ij. Requires pgf_ij(0) != 0.
SeriesMatrix gamma_matrix(const PgfExpansion& pgf);

/// Calls fn for every x >= 0 with x_1 + ... + x_parts = total, in
/// colexicographic order (last component most significant).
void for_each_composition(int total, std::size_t parts, const std::function<void(const Exponents&)>& fn);

/// Number of compositions of `total` into `parts` non-negative parts
/// (saturates at SIZE_MAX).
std::size_t composition_count(int total, std::size_t parts);

}  // namespace mbrisk
