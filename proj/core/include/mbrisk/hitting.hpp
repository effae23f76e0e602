#pragma once

#include <cstddef>
#include <vector>

#include "mbrisk/model.hpp"
#include "mbrisk/series.hpp"

namespace mbrisk {

/// First-passage matrices to one level: q[n](i,j) = P(tau_a^+ = n, J_n = j | J_0 = i)
/// for n = 0..n_max.
struct HittingTable {
  std::size_t level = 0;
  std::size_t n_max = 0;
  std::vector<Matrix> q;

  const Matrix& at(std::size_t n) const { return q.at(n); }
};

/// Upper first-passage distribution by forward dynamic programming over
/// (level, state). The process starts at level x0 and `level` must exceed x0.
/// Increments are at most +1, so every passage lands exactly on `level`.
HittingTable dp_Q(const ModelSpec& spec, std::size_t n_max, std::size_t level, long x0 = 0);

/// V(n,a) = diag(pi)^-1 Q~(n,a)^T diag(pi), where Q~ is dp_Q of the reversed model.
HittingTable dp_V(const ModelSpec& spec, std::size_t n_max, std::size_t level);
HittingTable dp_V(const ModelSpec& spec, const StateDist& pi, std::size_t n_max, std::size_t level);

/// Triangular table t[n][a] for 1 <= a <= n <= n_max (other slots zero).
using LevelTable = std::vector<std::vector<Matrix>>;

LevelTable dp_Q_levels(const ModelSpec& spec, std::size_t n_max);
LevelTable dp_V_levels(const ModelSpec& spec, const StateDist& pi, std::size_t n_max);

/// sum_m Lambda(m) A^m (Acting::kRight) or sum_m A^m Lambda(m) (Acting::kLeft).
Matrix pgf_at(const MatrixSeq& claims, Acting acting, const Matrix& arg);

struct LundbergOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 1'000'000;
};

/// Minimal non-negative solution of X = v pgf(X) from monotone fixed-point
/// iteration started at the zero matrix.
struct LundbergSolution {
  double v = 0.0;
  Acting side = Acting::kRight;
  Matrix matrix;
  /// max |X - v pgf(X)|
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Right solution G_v = v sum_m Lambda(m) G_v^m. Requires v in (0, 1].
LundbergSolution lundberg_G(const ModelSpec& spec, double v, const LundbergOptions& opts = {});
/// Left solution R_v = v sum_m R_v^m Lambda(m). Requires v in (0, 1].
LundbergSolution lundberg_R(const ModelSpec& spec, double v, const LundbergOptions& opts = {});

/// R_v = diag(pi)^-1 G~_v^T diag(pi) with G~_v the right solution of the reversed model.
Matrix r_from_reversal(const ModelSpec& spec, double v, const LundbergOptions& opts = {});

}  // namespace mbrisk
