#pragma once

#include <cstddef>
#include <vector>

#include "mbrisk/model.hpp"
#include "mbrisk/series.hpp"

namespace mbrisk {

// Multivariate Lagrange inversion of the Lundberg system G_ij = v pgf_ij(G):
//
//   [v^n] (G_v^a)_{rc} = sum_{|x| = n} [G^x] (G^a)_{rc} prod_ij pgf_ij(G)^{x_ij} det(I - Gamma(G))
//
// Derivatives at zero are replaced by monomial coefficients: b(x) = x! [G^x](...).
// With Acting::kRight the coefficients are the hitting matrices Q(n,a) of the
// process; with Acting::kLeft they are the matrices V(n,a) of the left
// Lundberg solution R_v.

struct LagrangeOptions {
  /// Refuse queries whose number of exponent vectors exceeds this bound.
  std::size_t max_compositions = 1'000'000;
};

/// b(x) for f(G) = (G^a)_{row,col}; `x` has N^2 entries indexed i*N + j.
double lagrange_b(const MatrixSeq& claims, Acting acting, std::size_t a, std::size_t row, std::size_t col,
                  const Exponents& x);

/// Coefficient matrices for every level at once: element a (0 <= a <= n) is
/// [v^n] G_v^a (or R_v^a). Exponent vectors are visited in colexicographic
/// order and summed in that order.
std::vector<Matrix> lagrange_levels(const MatrixSeq& claims, Acting acting, std::size_t n,
                                    const LagrangeOptions& opts = {});

/// Q(n,a) = P(tau_a^+ = n, J_tau | J_0). Zero for n < a. Requires a >= 1.
Matrix lagrange_Q(const ModelSpec& spec, std::size_t n, std::size_t a, const LagrangeOptions& opts = {});

/// V(n,a) = [v^n] R_v^a, built from the left-acting expansion.
Matrix lagrange_V(const ModelSpec& spec, std::size_t n, std::size_t a, const LagrangeOptions& opts = {});

}  // namespace mbrisk
