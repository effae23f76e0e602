#pragma once

#include <cstdint>
#include <random>

#include "mbrisk/model.hpp"

namespace mbrisk::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

/// N = 1: lambda(0) = 0.6, lambda(1) = 0.1, lambda(2) = 0.3.
inline ModelSpec m1() {
  ModelSpec s;
  s.n_states = 1;
  s.claims = MatrixSeq(1);
  s.claims.set(0, mat({{0.6}}));
  s.claims.set(1, mat({{0.1}}));
  s.claims.set(2, mat({{0.3}}));
  return s;
}

/// N = 2 fixture with P = [[0.7, 0.3], [0.4, 0.6]].
inline ModelSpec m2() {
  ModelSpec s;
  s.n_states = 2;
  s.claims = MatrixSeq(2);
  s.claims.set(0, mat({{0.5, 0.1}, {0.2, 0.2}}));
  s.claims.set(1, mat({{0.1, 0.1}, {0.1, 0.2}}));
  s.claims.set(2, mat({{0.1, 0.1}, {0.1, 0.2}}));
  return s;
}

/// Random valid model: every Lambda(m) entry drawn positive on claims
/// 0..max_claim, rows normalised, Lambda(0) carrying at least `zero_mass`
/// of each row.
inline ModelSpec random_model(std::size_t n, std::size_t max_claim, std::uint64_t seed, double zero_mass = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const auto d = static_cast<Eigen::Index>(n);
  std::vector<Matrix> raw(max_claim + 1, Matrix(d, d));
  for (auto& m : raw) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = unif(rng);
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double zero_row = raw[0].row(i).sum();
    double rest = 0.0;
    for (std::size_t c = 1; c <= max_claim; ++c) rest += raw[c].row(i).sum();
    raw[0].row(i) *= zero_mass / zero_row;
    for (std::size_t c = 1; c <= max_claim; ++c) raw[c].row(i) *= (1.0 - zero_mass) / rest;
  }
  ModelSpec s;
  s.n_states = n;
  s.claims = MatrixSeq(n);
  for (std::size_t c = 0; c <= max_claim; ++c) s.claims.set(c, raw[c]);
  // Rows sum to one up to rounding; absorb the residual into Lambda(0).
  const Matrix p = s.claims.total();
  Matrix zero = s.claims.at(0);
  for (Eigen::Index i = 0; i < d; ++i) zero(i, 0) += 1.0 - p.row(i).sum();
  s.claims.set(0, zero);
  return s;
}

/// The N = 3 model used by the acceptance grid.
inline ModelSpec m3() { return random_model(3, 2, 20240607); }

}  // namespace mbrisk::testing
