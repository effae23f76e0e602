#include "mbrisk/hitting.hpp"

#include <cmath>
#include <string>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

// Dense row-major N x N block.
struct Kernel {
  std::size_t claim;
  std::vector<double> mat;
};

std::vector<Kernel> flatten(const MatrixSeq& claims) {
  std::vector<Kernel> out;
  const auto n = static_cast<Eigen::Index>(claims.dim());
  for (const auto& [m, mat] : claims.entries()) {
    Kernel k{m, std::vector<double>(static_cast<std::size_t>(n * n))};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) k.mat[static_cast<std::size_t>(i * n + j)] = mat(i, j);
    }
    out.push_back(std::move(k));
  }
  return out;
}

// dst += src * kernel for N x N row-major blocks.
void mul_add(double* dst, const double* src, const double* kernel, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const double f = src[i * n + l];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) dst[i * n + j] += f * kernel[l * n + j];
    }
  }
}

void check_v(double v) {
  if (!(v > 0.0 && v <= 1.0)) throw ValidationError("discount v must lie in (0, 1]");
}

LundbergSolution solve_lundberg(const MatrixSeq& claims, Acting side, double v, const LundbergOptions& opts) {
  check_v(v);
  const auto n = static_cast<Eigen::Index>(claims.dim());
  LundbergSolution sol;
  sol.v = v;
  sol.side = side;
  Matrix x = Matrix::Zero(n, n);
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    Matrix next = v * pgf_at(claims, side, x);
    const double step = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (step < opts.tolerance) {
      sol.iterations = it;
      sol.matrix = x;
      sol.residual = (x - v * pgf_at(claims, side, x)).cwiseAbs().maxCoeff();
      return sol;
    }
  }
  throw ComputationError("no convergence: Lundberg fixed-point iteration exceeded " +
                         std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace

HittingTable dp_Q(const ModelSpec& spec, std::size_t n_max, std::size_t level, long x0) {
  if (static_cast<long>(level) <= x0) throw ValidationError("hitting level must lie above the start level");
  const std::size_t n = spec.n_states;
  const std::size_t block = n * n;
  const auto kernels = flatten(spec.claims);
  const long top = static_cast<long>(level) - 1;  // highest level still below the target

  HittingTable table;
  table.level = level;
  table.n_max = n_max;
  table.q.assign(n_max + 1, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));

  // f[y - lo] is the N x N block P(tau > k, X_k = y, J_k = . | J_0 = .).
  long lo = x0;
  std::vector<double> f((static_cast<std::size_t>(top - lo) + 1) * block, 0.0);
  for (std::size_t i = 0; i < n; ++i) f[static_cast<std::size_t>(x0 - lo) * block + i * n + i] = 1.0;

  const long max_claim = static_cast<long>(spec.claims.max_support());
  std::vector<double> hit(block);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const long new_lo = lo + 1 - max_claim;
    std::vector<double> g(new_lo <= top ? (static_cast<std::size_t>(top - new_lo) + 1) * block : 0, 0.0);
    std::fill(hit.begin(), hit.end(), 0.0);
    for (long y = lo; y <= top; ++y) {
      const double* src = &f[static_cast<std::size_t>(y - lo) * block];
      for (const Kernel& kern : kernels) {
        const long dest = y + 1 - static_cast<long>(kern.claim);
        if (dest > top) {
          mul_add(hit.data(), src, kern.mat.data(), n);
        } else {
          mul_add(&g[static_cast<std::size_t>(dest - new_lo) * block], src, kern.mat.data(), n);
        }
      }
    }
    Matrix& qk = table.q[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        qk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hit[i * n + j];
      }
    }
    f = std::move(g);
    lo = new_lo;
  }
  return table;
}

HittingTable dp_V(const ModelSpec& spec, const StateDist& pi, std::size_t n_max, std::size_t level) {
  HittingTable t = dp_Q(reverse(spec, pi), n_max, level);
  for (Matrix& m : t.q) m = conjugate_transpose(m, pi);
  return t;
}

HittingTable dp_V(const ModelSpec& spec, std::size_t n_max, std::size_t level) {
  return dp_V(spec, stationary_distribution(spec), n_max, level);
}

namespace {

LevelTable assemble_levels(const ModelSpec& spec, std::size_t n_max, const StateDist* pi) {
  const auto d = static_cast<Eigen::Index>(spec.n_states);
  LevelTable out(n_max + 1, std::vector<Matrix>(n_max + 1, Matrix::Zero(d, d)));
  const ModelSpec source = pi != nullptr ? reverse(spec, *pi) : spec;
  for (std::size_t a = 1; a <= n_max; ++a) {
    const HittingTable t = dp_Q(source, n_max, a);
    for (std::size_t n = a; n <= n_max; ++n) {
      out[n][a] = pi != nullptr ? conjugate_transpose(t.q[n], *pi) : t.q[n];
    }
  }
  return out;
}

}  // namespace

LevelTable dp_Q_levels(const ModelSpec& spec, std::size_t n_max) { return assemble_levels(spec, n_max, nullptr); }

LevelTable dp_V_levels(const ModelSpec& spec, const StateDist& pi, std::size_t n_max) {
  return assemble_levels(spec, n_max, &pi);
}

Matrix pgf_at(const MatrixSeq& claims, Acting acting, const Matrix& arg) {
  const auto n = static_cast<Eigen::Index>(claims.dim());
  Matrix sum = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  std::size_t reached = 0;
  for (const auto& [m, mat] : claims.entries()) {
    for (; reached < m; ++reached) power = power * arg;
    sum += acting == Acting::kRight ? Matrix(mat * power) : Matrix(power * mat);
  }
  return sum;
}

LundbergSolution lundberg_G(const ModelSpec& spec, double v, const LundbergOptions& opts) {
  return solve_lundberg(spec.claims, Acting::kRight, v, opts);
}

LundbergSolution lundberg_R(const ModelSpec& spec, double v, const LundbergOptions& opts) {
  return solve_lundberg(spec.claims, Acting::kLeft, v, opts);
}

Matrix r_from_reversal(const ModelSpec& spec, double v, const LundbergOptions& opts) {
  const StateDist pi = stationary_distribution(spec);
  return conjugate_transpose(lundberg_G(reverse(spec, pi), v, opts).matrix, pi);
}

}  // namespace mbrisk
