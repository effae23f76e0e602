#include "mbrisk/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

constexpr std::size_t kMaxSlots = std::size_t{1} << 26;

std::vector<std::size_t> nonzero_live(const Truncation& t, const std::vector<double>& c) {
  std::vector<std::size_t> out;
  for (std::size_t s : t.live()) {
    if (c[s] != 0.0) out.push_back(s);
  }
  return out;
}

bool fits(std::span<const int> a, std::span<const int> b, const Exponents& caps) {
  for (std::size_t v = 0; v < caps.size(); ++v) {
    if (a[v] + b[v] > caps[v]) return false;
  }
  return true;
}

bool below(std::span<const int> a, std::span<const int> b) {
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a[v] > b[v]) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Truncation

Truncation::Truncation(Exponents caps, int degree) : caps_(std::move(caps)), degree_(degree) {
  if (degree_ < 0) throw ValidationError("truncation degree must be non-negative");
  strides_.resize(caps_.size());
  for (std::size_t v = 0; v < caps_.size(); ++v) {
    if (caps_[v] < 0) throw ValidationError("truncation caps must be non-negative");
    caps_[v] = std::min(caps_[v], degree_);
    strides_[v] = slots_;
    const auto width = static_cast<std::size_t>(caps_[v]) + 1;
    if (slots_ > kMaxSlots / width) throw ValidationError("series truncation too large for dense storage");
    slots_ *= width;
  }
  const std::size_t nv = caps_.size();
  exps_.assign(slots_ * nv, 0);
  degrees_.assign(slots_, 0);
  Exponents e(nv, 0);
  for (std::size_t s = 0; s < slots_; ++s) {
    std::copy(e.begin(), e.end(), exps_.begin() + static_cast<std::ptrdiff_t>(s * nv));
    degrees_[s] = std::accumulate(e.begin(), e.end(), 0);
    for (std::size_t v = 0; v < nv; ++v) {
      if (++e[v] <= caps_[v]) break;
      e[v] = 0;
    }
  }
  for (std::size_t s = 0; s < slots_; ++s) {
    if (degrees_[s] <= degree_) live_.push_back(s);
  }
  std::stable_sort(live_.begin(), live_.end(),
                   [this](std::size_t a, std::size_t b) { return degrees_[a] < degrees_[b]; });
}

std::shared_ptr<const Truncation> Truncation::total_degree(std::size_t n_vars, int degree) {
  return std::shared_ptr<const Truncation>(new Truncation(Exponents(n_vars, degree), degree));
}

std::shared_ptr<const Truncation> Truncation::box(Exponents caps, int degree) {
  return std::shared_ptr<const Truncation>(new Truncation(std::move(caps), degree));
}

bool Truncation::contains(std::span<const int> e) const {
  if (e.size() != caps_.size()) return false;
  int total = 0;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] < 0 || e[v] > caps_[v]) return false;
    total += e[v];
  }
  return total <= degree_;
}

std::size_t Truncation::index_of(std::span<const int> e) const {
  std::size_t slot = 0;
  for (std::size_t v = 0; v < e.size(); ++v) slot += static_cast<std::size_t>(e[v]) * strides_[v];
  return slot;
}

// ---------------------------------------------------------------------------
// MultiSeries

MultiSeries::MultiSeries(TruncationPtr trunc) : trunc_(std::move(trunc)), c_(trunc_->slots(), 0.0) {}

MultiSeries MultiSeries::constant(TruncationPtr trunc, double c) {
  MultiSeries s(std::move(trunc));
  s.c_[0] = c;
  return s;
}

MultiSeries MultiSeries::variable(TruncationPtr trunc, std::size_t var, double coeff) {
  MultiSeries s(std::move(trunc));
  if (var >= s.n_vars()) throw ValidationError("variable index out of range");
  if (s.trunc_->caps()[var] >= 1 && s.degree() >= 1) s.c_[s.trunc_->stride(var)] = coeff;
  return s;
}

MultiSeries MultiSeries::monomial(TruncationPtr trunc, std::span<const int> e, double coeff) {
  MultiSeries s(std::move(trunc));
  if (e.size() != s.n_vars()) throw ValidationError("exponent vector has wrong length");
  if (s.trunc_->contains(e)) s.c_[s.trunc_->index_of(e)] = coeff;
  return s;
}

double MultiSeries::coeff(std::span<const int> e) const {
  if (!trunc_->contains(e)) return 0.0;
  return c_[trunc_->index_of(e)];
}

void MultiSeries::set_coeff(std::span<const int> e, double value) {
  if (!trunc_->contains(e)) throw ValidationError("monomial outside the series truncation");
  c_[trunc_->index_of(e)] = value;
}

bool MultiSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](double x) { return x == 0.0; });
}

std::vector<std::pair<Exponents, double>> MultiSeries::terms() const {
  std::vector<std::pair<Exponents, double>> out;
  for (std::size_t s : trunc_->live()) {
    if (c_[s] == 0.0) continue;
    auto e = trunc_->exponents(s);
    out.emplace_back(Exponents(e.begin(), e.end()), c_[s]);
  }
  return out;
}

void MultiSeries::require_same(const MultiSeries& other) const {
  if (trunc_ != other.trunc_ && !(*trunc_ == *other.trunc_)) {
    throw ValidationError("degree mismatch: series operands have different truncations");
  }
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& rhs) {
  require_same(rhs);
  for (std::size_t s = 0; s < c_.size(); ++s) c_[s] += rhs.c_[s];
  return *this;
}

MultiSeries& MultiSeries::operator-=(const MultiSeries& rhs) {
  require_same(rhs);
  for (std::size_t s = 0; s < c_.size(); ++s) c_[s] -= rhs.c_[s];
  return *this;
}

MultiSeries& MultiSeries::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

MultiSeries MultiSeries::operator-() const {
  MultiSeries out = *this;
  return out *= -1.0;
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
  a.require_same(b);
  const Truncation& t = *a.trunc_;
  MultiSeries out(a.trunc_);
  const auto ia = nonzero_live(t, a.c_);
  const auto ib = nonzero_live(t, b.c_);  // increasing degree
  const int d = t.degree();
  for (std::size_t i : ia) {
    const auto ei = t.exponents(i);
    const int di = t.degree_of(i);
    const double ci = a.c_[i];
    for (std::size_t j : ib) {
      if (di + t.degree_of(j) > d) break;
      if (!fits(ei, t.exponents(j), t.caps())) continue;
      out.c_[i + j] += ci * b.c_[j];
    }
  }
  return out;
}

MultiSeries MultiSeries::derive(std::size_t var) const {
  if (var >= n_vars()) throw ValidationError("variable index out of range");
  MultiSeries out(trunc_);
  const std::size_t stride = trunc_->stride(var);
  for (std::size_t s : trunc_->live()) {
    const int k = trunc_->exponents(s)[var];
    if (k > 0 && c_[s] != 0.0) out.c_[s - stride] += k * c_[s];
  }
  return out;
}

MultiSeries MultiSeries::shift(std::size_t var) const {
  if (var >= n_vars()) throw ValidationError("variable index out of range");
  MultiSeries out(trunc_);
  const std::size_t stride = trunc_->stride(var);
  const int cap = trunc_->caps()[var];
  for (std::size_t s : trunc_->live()) {
    if (c_[s] == 0.0) continue;
    if (trunc_->exponents(s)[var] + 1 > cap || trunc_->degree_of(s) + 1 > degree()) continue;
    out.c_[s + stride] = c_[s];
  }
  return out;
}

MultiSeries MultiSeries::inverse() const {
  const double c0 = c_[0];
  if (c0 == 0.0) throw ComputationError("series not invertible");
  const Truncation& t = *trunc_;
  MultiSeries out(trunc_);
  out.c_[0] = 1.0 / c0;
  std::vector<std::size_t> tail = nonzero_live(t, c_);
  tail.erase(std::remove(tail.begin(), tail.end(), std::size_t{0}), tail.end());
  // inv[e] = -(1/c0) * sum_{0 < f <= e} this[f] * inv[e - f], in increasing degree.
  for (std::size_t e : t.live()) {
    if (e == 0) continue;
    const auto ee = t.exponents(e);
    const int de = t.degree_of(e);
    double acc = 0.0;
    for (std::size_t f : tail) {
      if (t.degree_of(f) > de) break;
      if (!below(t.exponents(f), ee)) continue;
      acc += c_[f] * out.c_[e - f];
    }
    out.c_[e] = -acc / c0;
  }
  return out;
}

MultiSeries MultiSeries::pow(unsigned k) const {
  MultiSeries result = constant(trunc_, 1.0);
  MultiSeries base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

MultiSeries MultiSeries::restricted(TruncationPtr target) const {
  if (target->n_vars() != n_vars() || target->degree() > degree()) {
    throw ValidationError("restriction target is not a sub-truncation");
  }
  for (std::size_t v = 0; v < n_vars(); ++v) {
    if (target->caps()[v] > trunc_->caps()[v]) throw ValidationError("restriction target is not a sub-truncation");
  }
  MultiSeries out(target);
  for (std::size_t s : target->live()) out.c_[s] = c_[trunc_->index_of(target->exponents(s))];
  return out;
}

double MultiSeries::top_coefficient_of_product(const MultiSeries& other) const {
  require_same(other);
  const Truncation& t = *trunc_;
  const Exponents& top = t.caps();
  if (!t.contains(top)) throw ValidationError("box corner is truncated by the total degree");
  const std::size_t top_slot = t.index_of(top);
  double acc = 0.0;
  for (std::size_t s : t.live()) {
    if (c_[s] == 0.0) continue;
    acc += c_[s] * other.c_[top_slot - s];
  }
  return acc;
}

MultiSeries add(const MultiSeries& a, const MultiSeries& b) { return a + b; }
MultiSeries mul(const MultiSeries& a, const MultiSeries& b) { return a * b; }
MultiSeries scale(const MultiSeries& a, double s) { return a * s; }
MultiSeries derive(const MultiSeries& s, std::size_t var) { return s.derive(var); }
MultiSeries div(const MultiSeries& num, const MultiSeries& den) { return num * den.inverse(); }

double max_abs_diff(const MultiSeries& a, const MultiSeries& b) {
  const MultiSeries d = a - b;
  double m = 0.0;
  for (std::size_t s : d.truncation()->live()) m = std::max(m, std::abs(d.coeff_at(s)));
  return m;
}

// ---------------------------------------------------------------------------
// SeriesMatrix

SeriesMatrix::SeriesMatrix(std::size_t rows, std::size_t cols, TruncationPtr trunc)
    : rows_(rows), cols_(cols), trunc_(trunc), data_(rows * cols, MultiSeries(trunc)) {}

SeriesMatrix SeriesMatrix::identity(std::size_t n, TruncationPtr trunc) {
  SeriesMatrix out(n, n, trunc);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = MultiSeries::constant(trunc, 1.0);
  return out;
}

SeriesMatrix SeriesMatrix::from_matrix(const Matrix& m, TruncationPtr trunc) {
  SeriesMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), trunc);
  for (std::size_t i = 0; i < out.rows_; ++i) {
    for (std::size_t j = 0; j < out.cols_; ++j) {
      out(i, j) = MultiSeries::constant(trunc, m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  return out;
}

SeriesMatrix SeriesMatrix::variables(std::size_t n, TruncationPtr trunc) {
  if (trunc->n_vars() != n * n) throw ValidationError("variable matrix needs N^2 series variables");
  SeriesMatrix out(n, n, trunc);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = MultiSeries::variable(trunc, i * n + j);
  }
  return out;
}

Matrix SeriesMatrix::constant_terms() const {
  Matrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).constant_term();
    }
  }
  return out;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols_ != b.rows_) throw ValidationError("series matrix shape mismatch");
  SeriesMatrix out(a.rows_, b.cols_, a.trunc_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const MultiSeries& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (b(k, j).is_zero()) continue;
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

SeriesMatrix operator*(const Matrix& a, const SeriesMatrix& b) {
  if (static_cast<std::size_t>(a.cols()) != b.rows_) throw ValidationError("series matrix shape mismatch");
  SeriesMatrix out(static_cast<std::size_t>(a.rows()), b.cols_, b.trunc_);
  for (std::size_t i = 0; i < out.rows_; ++i) {
    for (std::size_t k = 0; k < b.rows_; ++k) {
      const double aik = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += b(k, j) * aik;
    }
  }
  return out;
}

SeriesMatrix operator*(const SeriesMatrix& a, const Matrix& b) {
  if (a.cols_ != static_cast<std::size_t>(b.rows())) throw ValidationError("series matrix shape mismatch");
  SeriesMatrix out(a.rows_, static_cast<std::size_t>(b.cols()), a.trunc_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      for (std::size_t j = 0; j < out.cols_; ++j) {
        const double bkj = b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        if (bkj != 0.0) out(i, j) += a(i, k) * bkj;
      }
    }
  }
  return out;
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("series matrix shape mismatch");
  SeriesMatrix out = a;
  for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= b.data_[k];
  return out;
}

SeriesMatrix& SeriesMatrix::operator+=(const SeriesMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ValidationError("series matrix shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

// ---------------------------------------------------------------------------
// Determinant

namespace {

MultiSeries cofactor_det(const std::vector<std::vector<MultiSeries>>& m, const TruncationPtr& trunc) {
  const std::size_t n = m.size();
  if (n == 0) return MultiSeries::constant(trunc, 1.0);
  if (n == 1) return m[0][0];
  MultiSeries acc(trunc);
  for (std::size_t col = 0; col < n; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<MultiSeries>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<MultiSeries> row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    MultiSeries term = m[0][col] * cofactor_det(minor, trunc);
    if (col % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

}  // namespace

MultiSeries det_series(SeriesMatrix m) {
  if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square series matrix");
  const std::size_t n = m.rows();
  const TruncationPtr trunc = m.truncation();
  std::vector<std::vector<MultiSeries>> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i].push_back(m(i, j));
  }
  const auto original = a;

  MultiSeries det = MultiSeries::constant(trunc, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k].constant_term()) > std::abs(a[pivot][k].constant_term())) pivot = i;
    }
    if (a[pivot][k].constant_term() == 0.0) {
      if (n > 8) throw ComputationError("determinant requires invertible leading minor");
      return cofactor_det(original, trunc);
    }
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      det *= -1.0;
    }
    const MultiSeries inv = a[k][k].inverse();
    det = det * a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k].is_zero()) continue;
      const MultiSeries factor = a[i][k] * inv;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (!a[k][j].is_zero()) a[i][j] -= factor * a[k][j];
      }
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Symbolic pgf

PgfExpansion::PgfExpansion(const MatrixSeq& claims, Acting acting, TruncationPtr trunc)
    : n_(claims.dim()), acting_(acting), trunc_(trunc), value_(n_, n_, trunc) {
  if (trunc_->n_vars() != n_ * n_) throw ValidationError("pgf truncation needs N^2 variables");
  const int d = trunc_->degree();
  for (const auto& [m, mat] : claims.entries()) {
    if (static_cast<long long>(m) <= d + 1) kernel_.emplace_back(m, mat);
  }
  const std::size_t top = std::min<std::size_t>(claims.max_support(), static_cast<std::size_t>(d));
  powers_.push_back(SeriesMatrix::identity(n_, trunc_));
  if (top >= 1) {
    const SeriesMatrix g = SeriesMatrix::variables(n_, trunc_);
    for (std::size_t r = 1; r <= top; ++r) powers_.push_back(powers_.back() * g);
  }
  for (const auto& [m, mat] : kernel_) {
    if (m > top) continue;
    value_ += acting_ == Acting::kRight ? mat * powers_[m] : powers_[m] * mat;
  }
}

SeriesMatrix PgfExpansion::partial(std::size_t var) const {
  if (var >= n_ * n_) throw ValidationError("variable index out of range");
  const std::size_t k = var / n_;
  const std::size_t l = var % n_;
  SeriesMatrix out(n_, n_, trunc_);
  // d/dG_kl G^m = sum_{r+s=m-1} G^r E_kl G^s, and (G^r E_kl G^s)_{pq} = (G^r)_{pk} (G^s)_{lq}.
  for (const auto& [m, mat] : kernel_) {
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t s = m - 1 - r;
      if (r >= powers_.size() || s >= powers_.size()) continue;
      const SeriesMatrix& gr = powers_[r];
      const SeriesMatrix& gs = powers_[s];
      for (std::size_t i = 0; i < n_; ++i) {
        if (acting_ == Acting::kRight) {
          // (Lambda G^r)_{ik} * (G^s)_{lj}
          MultiSeries left(trunc_);
          for (std::size_t p = 0; p < n_; ++p) {
            const double w = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p));
            if (w != 0.0 && !gr(p, k).is_zero()) left += gr(p, k) * w;
          }
          if (left.is_zero()) continue;
          for (std::size_t j = 0; j < n_; ++j) {
            if (!gs(l, j).is_zero()) out(i, j) += left * gs(l, j);
          }
        } else {
          // (G^r)_{ik} * (G^s Lambda)_{lj}
          if (gr(i, k).is_zero()) continue;
          for (std::size_t j = 0; j < n_; ++j) {
            MultiSeries right(trunc_);
            for (std::size_t q = 0; q < n_; ++q) {
              const double w = mat(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
              if (w != 0.0 && !gs(l, q).is_zero()) right += gs(l, q) * w;
            }
            if (!right.is_zero()) out(i, j) += gr(i, k) * right;
          }
        }
      }
    }
  }
  return out;
}

SeriesMatrix symbolic_pgf(const ModelSpec& spec, Acting acting, int degree) {
  const auto trunc = Truncation::total_degree(spec.n_states * spec.n_states, degree);
  return PgfExpansion(spec.claims, acting, trunc).value();
}

SeriesMatrix gamma_matrix(const PgfExpansion& pgf) {
  const std::size_t n = pgf.n_states();
  const std::size_t nv = n * n;
  const TruncationPtr& trunc = pgf.truncation();
  std::vector<SeriesMatrix> partials;
  partials.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) partials.push_back(pgf.partial(v));
  SeriesMatrix out(nv, nv, trunc);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      const MultiSeries inv = pgf.value()(i, j).inverse();
      for (std::size_t col = 0; col < nv; ++col) {
        out(row, col) = (partials[col](i, j) * inv).shift(row);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compositions

namespace {

void compositions_rec(int remaining, std::size_t pos, Exponents& x,
                      const std::function<void(const Exponents&)>& fn) {
  if (pos == 0) {
    x[0] = remaining;
    fn(x);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    x[pos] = v;
    compositions_rec(remaining - v, pos - 1, x, fn);
  }
  x[pos] = 0;
}

}  // namespace

void for_each_composition(int total, std::size_t parts, const std::function<void(const Exponents&)>& fn) {
  if (parts == 0 || total < 0) return;
  Exponents x(parts, 0);
  compositions_rec(total, parts - 1, x, fn);
}

std::size_t composition_count(int total, std::size_t parts) {
  if (parts == 0 || total < 0) return 0;
  // C(total + parts - 1, parts - 1)
  const std::size_t k = parts - 1;
  const std::size_t n = static_cast<std::size_t>(total) + k;
  long double acc = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc >= 9.0e18L) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(std::llround(acc));
}

}  // namespace mbrisk
