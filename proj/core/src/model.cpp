#include "mbrisk/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbrisk/error.hpp"

namespace mbrisk {

MatrixSeq MatrixSeq::identity(std::size_t dim) {
  MatrixSeq seq(dim);
  seq.set(0, Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  return seq;
}

std::size_t MatrixSeq::max_support() const { return mats_.empty() ? 0 : mats_.rbegin()->first; }

std::vector<std::size_t> MatrixSeq::support() const {
  std::vector<std::size_t> out;
  out.reserve(mats_.size());
  for (const auto& [m, _] : mats_) out.push_back(m);
  return out;
}

Matrix MatrixSeq::at(std::size_t m) const {
  if (auto it = mats_.find(m); it != mats_.end()) return it->second;
  const auto d = static_cast<Eigen::Index>(dim_);
  return Matrix::Zero(d, d);
}

void MatrixSeq::set(std::size_t m, Matrix mat) {
  if (mat.rows() != static_cast<Eigen::Index>(dim_) || mat.cols() != static_cast<Eigen::Index>(dim_)) {
    throw ValidationError("MatrixSeq: matrix at index " + std::to_string(m) + " has shape " +
                          std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) +
                          ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
  }
  if (mat.isZero(0.0)) {
    mats_.erase(m);
  } else {
    mats_[m] = std::move(mat);
  }
}

Matrix MatrixSeq::total() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& [_, mat] : mats_) sum += mat;
  return sum;
}

bool operator==(const MatrixSeq& a, const MatrixSeq& b) {
  if (a.dim_ != b.dim_ || a.mats_.size() != b.mats_.size()) return false;
  return std::equal(a.mats_.begin(), a.mats_.end(), b.mats_.begin(), [](const auto& x, const auto& y) {
    return x.first == y.first && x.second == y.second;
  });
}

bool operator==(const ModelSpec& a, const ModelSpec& b) {
  return a.n_states == b.n_states && a.claims == b.claims && a.initial == b.initial;
}

std::vector<Violation> validate(const ModelSpec& spec) {
  std::vector<Violation> out;
  const std::size_t n = spec.n_states;
  if (n == 0) {
    out.push_back({ViolationKind::kDimension, "states must be a positive integer"});
    return out;
  }
  if (spec.claims.dim() != n) {
    out.push_back({ViolationKind::kDimension, "claim matrices are " + std::to_string(spec.claims.dim()) +
                                                  "x" + std::to_string(spec.claims.dim()) + " but states = " +
                                                  std::to_string(n)});
    return out;
  }
  if (spec.claims.empty()) {
    out.push_back({ViolationKind::kEmptyKernel, "claim kernel is empty"});
    return out;
  }

  for (const auto& [m, mat] : spec.claims.entries()) {
    if ((mat.array() < 0.0).any() || !mat.allFinite()) {
      out.push_back({ViolationKind::kNegativeEntry,
                     "Λ(" + std::to_string(m) + ") has negative or non-finite entries"});
    }
  }

  const Matrix p = spec.claims.total();
  const Eigen::VectorXd rows = p.rowwise().sum();
  if (((rows.array() - 1.0).abs() > kStochasticTolerance).any()) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "row sums of ΣΛ(m) ≠ 1 (got";
    for (Eigen::Index i = 0; i < rows.size(); ++i) msg << ' ' << rows(i);
    msg << ')';
    out.push_back({ViolationKind::kRowSum, msg.str()});
  }

  const Matrix zero = spec.claims.at(0);
  if (!(zero.array() > 0.0).all()) {
    out.push_back({ViolationKind::kZeroClaimNotPositive, "Λ(0) must be strictly positive"});
  } else {
    Eigen::FullPivLU<Matrix> lu(zero);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      out.push_back({ViolationKind::kZeroClaimSingular, "Λ(0) must be invertible"});
    }
  }

  if (!is_ergodic(p)) {
    out.push_back({ViolationKind::kNotErgodic, "transition matrix P is not ergodic"});
  }

  if (const auto* vec = std::get_if<std::vector<double>>(&spec.initial)) {
    double sum = 0.0;
    bool bad = vec->size() != n;
    for (double x : *vec) {
      bad = bad || !(x >= 0.0) || !std::isfinite(x);
      sum += x;
    }
    if (bad || std::abs(sum - 1.0) > kStochasticTolerance) {
      out.push_back({ViolationKind::kInitialLaw,
                     "initial must be \"stationary\" or a probability vector of length " + std::to_string(n)});
    }
  }
  return out;
}

void require_valid(const ModelSpec& spec) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw ValidationError(msg);
}

Matrix transition_matrix(const ModelSpec& spec) { return spec.claims.total(); }

bool is_ergodic(const Matrix& p) {
  const Eigen::Index n = p.rows();
  if (n == 0 || p.cols() != n) return false;
  // Primitive iff the pattern of P^k is positive for k = (n-1)^2 + 1 (Wielandt).
  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  const Pattern base = (p.array() > 0.0).cast<int>();
  Pattern power = base;
  const Eigen::Index bound = (n - 1) * (n - 1) + 1;
  for (Eigen::Index k = 1; k < bound; ++k) {
    power = ((power * base).array() > 0).cast<int>();
  }
  return (power.array() > 0).all();
}

StateDist stationary_distribution(const Matrix& p) {
  if (!is_ergodic(p)) throw ComputationError("no unique stationary distribution");
  const Eigen::Index n = p.rows();
  Matrix system(n + 1, n);
  system.topRows(n) = p.transpose() - Matrix::Identity(n, n);
  system.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  const Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
  return StateDist{pi.transpose()};
}

StateDist stationary_distribution(const ModelSpec& spec) {
  return stationary_distribution(transition_matrix(spec));
}

Matrix conjugate_transpose(const Matrix& a, const StateDist& pi) {
  const Eigen::VectorXd w = pi.probs.transpose();
  return w.cwiseInverse().asDiagonal() * a.transpose() * w.asDiagonal();
}

ModelSpec reverse(const ModelSpec& spec, const StateDist& pi) {
  ModelSpec out;
  out.n_states = spec.n_states;
  out.initial = spec.initial;
  out.claims = MatrixSeq(spec.claims.dim());
  for (const auto& [m, mat] : spec.claims.entries()) out.claims.set(m, conjugate_transpose(mat, pi));
  return out;
}

ModelSpec reverse(const ModelSpec& spec) { return reverse(spec, stationary_distribution(spec)); }

}  // namespace mbrisk
