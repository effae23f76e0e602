#include "mbrisk/lagrange.hpp"

#include <cmath>
#include <string>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

// prod_ij pgf_ij^{x_ij} * det(I - Gamma), on the box below x.
//
// Rows of Gamma carry the factor G_ij and vanish when x_ij = 0, so the
// determinant reduces to the principal minor on the support of x.
MultiSeries lagrange_kernel(const PgfExpansion& pgf, const Exponents& x) {
  const std::size_t n = pgf.n_states();
  const TruncationPtr& trunc = pgf.truncation();
  std::vector<std::size_t> support;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] > 0) support.push_back(v);
  }
  const std::size_t k = support.size();

  std::vector<SeriesMatrix> partials;
  partials.reserve(k);
  for (std::size_t v : support) partials.push_back(pgf.partial(v));

  SeriesMatrix i_minus_gamma = SeriesMatrix::identity(k, trunc);
  MultiSeries product = MultiSeries::constant(trunc, 1.0);
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t var = support[p];
    const MultiSeries& entry = pgf.value()(var / n, var % n);
    const MultiSeries inv = entry.inverse();
    for (std::size_t q = 0; q < k; ++q) {
      i_minus_gamma(p, q) -= (partials[q](var / n, var % n) * inv).shift(var);
    }
    product = product * entry.pow(static_cast<unsigned>(x[var]));
  }
  return product * det_series(std::move(i_minus_gamma));
}

std::vector<SeriesMatrix> variable_powers(std::size_t n_states, const TruncationPtr& trunc, std::size_t top) {
  std::vector<SeriesMatrix> powers;
  powers.push_back(SeriesMatrix::identity(n_states, trunc));
  const SeriesMatrix g = SeriesMatrix::variables(n_states, trunc);
  for (std::size_t a = 1; a <= top; ++a) powers.push_back(powers.back() * g);
  return powers;
}

double factorial_weight(const Exponents& x) {
  double w = 1.0;
  for (int k : x) w *= std::tgamma(static_cast<double>(k) + 1.0);
  return w;
}

void require_shape(const MatrixSeq& claims, const Exponents& x) {
  if (x.size() != claims.dim() * claims.dim()) {
    throw ValidationError("exponent vector must have N^2 = " + std::to_string(claims.dim() * claims.dim()) +
                          " entries");
  }
  for (int k : x) {
    if (k < 0) throw ValidationError("exponent vector entries must be non-negative");
  }
}

}  // namespace

double lagrange_b(const MatrixSeq& claims, Acting acting, std::size_t a, std::size_t row, std::size_t col,
                  const Exponents& x) {
  require_shape(claims, x);
  const std::size_t n = claims.dim();
  if (row >= n || col >= n) throw ValidationError("matrix index out of range");
  int total = 0;
  for (int k : x) total += k;
  if (static_cast<std::size_t>(total) < a) return 0.0;

  const auto trunc = Truncation::box(x, total);
  const PgfExpansion pgf(claims, acting, trunc);
  const MultiSeries kernel = lagrange_kernel(pgf, x);
  const auto powers = variable_powers(n, trunc, a);
  return factorial_weight(x) * powers[a](row, col).top_coefficient_of_product(kernel);
}

std::vector<Matrix> lagrange_levels(const MatrixSeq& claims, Acting acting, std::size_t n,
                                    const LagrangeOptions& opts) {
  const std::size_t states = claims.dim();
  const std::size_t vars = states * states;
  const auto d = static_cast<Eigen::Index>(states);
  const std::size_t count = composition_count(static_cast<int>(n), vars);
  if (count > opts.max_compositions) {
    throw ComputationError("Lagrange expansion at n = " + std::to_string(n) + " needs " + std::to_string(count) +
                           " exponent vectors (limit " + std::to_string(opts.max_compositions) +
                           "); use the dynamic-programming route");
  }

  std::vector<Matrix> out(n + 1, Matrix::Zero(d, d));
  for_each_composition(static_cast<int>(n), vars, [&](const Exponents& x) {
    const auto trunc = Truncation::box(x, static_cast<int>(n));
    const PgfExpansion pgf(claims, acting, trunc);
    const MultiSeries kernel = lagrange_kernel(pgf, x);
    const auto powers = variable_powers(states, trunc, n);
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t r = 0; r < states; ++r) {
        for (std::size_t c = 0; c < states; ++c) {
          const MultiSeries& f = powers[a](r, c);
          if (f.is_zero()) continue;
          out[a](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
              f.top_coefficient_of_product(kernel);
        }
      }
    }
  });
  return out;
}

Matrix lagrange_Q(const ModelSpec& spec, std::size_t n, std::size_t a, const LagrangeOptions& opts) {
  if (a == 0) throw ValidationError("hitting level must be >= 1");
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  if (n < a) return Matrix::Zero(d, d);
  return lagrange_levels(spec.claims, Acting::kRight, n, opts)[a];
}

Matrix lagrange_V(const ModelSpec& spec, std::size_t n, std::size_t a, const LagrangeOptions& opts) {
  if (a == 0) throw ValidationError("hitting level must be >= 1");
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  if (n < a) return Matrix::Zero(d, d);
  return lagrange_levels(spec.claims, Acting::kLeft, n, opts)[a];
}

}  // namespace mbrisk
