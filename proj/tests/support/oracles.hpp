#pragma once

// Brute-force oracles that enumerate every path of the chain. They share no
// code with the library's formulas or dynamic programs.

#include <cstddef>
#include <functional>
#include <vector>

#include "mbrisk/model.hpp"

namespace mbrisk::testing {

struct Step {
  std::size_t claim;
  std::size_t state;
};

/// Calls visit(prob, path) for every positive-probability path of n steps
/// started from J_0 = start.
inline void enumerate_paths(const ModelSpec& spec, std::size_t start, std::size_t n,
                            const std::function<void(double, const std::vector<Step>&)>& visit) {
  std::vector<Step> path;
  path.reserve(n);
  std::function<void(std::size_t, double)> rec = [&](std::size_t state, double prob) {
    if (path.size() == n) {
      visit(prob, path);
      return;
    }
    for (const auto& [c, lam] : spec.claims.entries()) {
      for (std::size_t j = 0; j < spec.n_states; ++j) {
        const double w = lam(static_cast<Eigen::Index>(state), static_cast<Eigen::Index>(j));
        if (w <= 0.0) continue;
        path.push_back({c, j});
        rec(j, prob * w);
        path.pop_back();
      }
    }
  };
  rec(start, 1.0);
}

/// pi by power iteration (independent of the linear solve).
inline RowVector power_pi(const ModelSpec& spec) {
  const Matrix p = spec.claims.total();
  RowVector v = RowVector::Constant(p.rows(), 1.0 / static_cast<double>(p.rows()));
  for (int k = 0; k < 20000; ++k) v = v * p;
  return v / v.sum();
}

/// P(tau_a^+ = n, J_n = j | J_0 = i) from level 0.
inline Matrix brute_hitting(const ModelSpec& spec, std::size_t n, std::size_t a) {
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    enumerate_paths(spec, i, n, [&](double prob, const std::vector<Step>& path) {
      long x = 0;
      for (std::size_t k = 0; k < n; ++k) {
        x += 1 - static_cast<long>(path[k].claim);
        if (x >= static_cast<long>(a)) {
          if (k + 1 == n) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(path.back().state)) += prob;
          return;
        }
      }
    });
  }
  return out;
}

/// P(X_k > 0 for 1 <= k <= n | X_0 = x, J_0 = i) per i.
inline Eigen::VectorXd brute_survival_by_state(const ModelSpec& spec, long x, std::size_t n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.n_states));
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    enumerate_paths(spec, i, n, [&](double prob, const std::vector<Step>& path) {
      long level = x;
      for (const Step& s : path) {
        level += 1 - static_cast<long>(s.claim);
        if (level <= 0) return;
      }
      out(static_cast<Eigen::Index>(i)) += prob;
    });
  }
  return out;
}

/// P(tau_0^- = n, J_n = j | X_0 = x, J_0 = i).
inline Matrix brute_ruin_time(const ModelSpec& spec, long x, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    enumerate_paths(spec, i, n, [&](double prob, const std::vector<Step>& path) {
      long level = x;
      for (std::size_t k = 0; k < n; ++k) {
        level += 1 - static_cast<long>(path[k].claim);
        if (level <= 0) {
          if (k + 1 == n) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(path.back().state)) += prob;
          return;
        }
      }
    });
  }
  return out;
}

/// (P(S_k < k for all k <= n, S_n = m), P(S_n = m)) under the start law `law`.
inline std::pair<double, double> brute_ballot(const ModelSpec& spec, const RowVector& law, std::size_t n,
                                              std::size_t m) {
  double joint = 0.0;
  double evidence = 0.0;
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    const double w = law(static_cast<Eigen::Index>(i));
    enumerate_paths(spec, i, n, [&](double prob, const std::vector<Step>& path) {
      std::size_t s = 0;
      bool below = true;
      for (std::size_t k = 0; k < n; ++k) {
        s += path[k].claim;
        below = below && s < k + 1;
      }
      if (s != m) return;
      evidence += w * prob;
      if (below) joint += w * prob;
    });
  }
  return {joint, evidence};
}

/// P(C_{t_0} = k_0, ..., C_{t_r} = k_r) under the start law `law`.
inline double brute_joint_claims(const ModelSpec& spec, const RowVector& law, const std::vector<std::size_t>& times,
                                 const std::vector<std::size_t>& values) {
  std::size_t horizon = 0;
  for (std::size_t t : times) horizon = std::max(horizon, t);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    enumerate_paths(spec, i, horizon, [&](double prob, const std::vector<Step>& path) {
      for (std::size_t r = 0; r < times.size(); ++r) {
        if (path[times[r] - 1].claim != values[r]) return;
      }
      total += law(static_cast<Eigen::Index>(i)) * prob;
    });
  }
  return total;
}

/// P(S_n = m, J_n = j | J_0 = i): the n-fold convolution by enumeration.
inline Matrix brute_nfold(const ModelSpec& spec, std::size_t n, std::size_t m) {
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < spec.n_states; ++i) {
    enumerate_paths(spec, i, n, [&](double prob, const std::vector<Step>& path) {
      std::size_t s = 0;
      for (const Step& st : path) s += st.claim;
      if (s == m) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n == 0 ? i : path.back().state)) += prob;
    });
  }
  return out;
}

}  // namespace mbrisk::testing
