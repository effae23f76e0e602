#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace mbrisk {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

/// Stochasticity tolerance applied when a model is validated.
inline constexpr double kStochasticTolerance = 1e-12;

/// Finitely supported sequence m -> A(m) of square matrices of one dimension.
/// Only non-zero matrices are stored; `at` returns the zero matrix elsewhere.
class MatrixSeq {
 public:
  MatrixSeq() = default;
  explicit MatrixSeq(std::size_t dim) : dim_(dim) {}

  /// The unit of convolution: delta_0(0) = I.
  static MatrixSeq identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool empty() const { return mats_.empty(); }

  /// Largest m with a stored matrix (0 for an empty sequence).
  std::size_t max_support() const;
  std::vector<std::size_t> support() const;

  Matrix at(std::size_t m) const;
  const std::map<std::size_t, Matrix>& entries() const { return mats_; }

  /// Stores `mat` at m. An all-zero matrix erases the entry.
  void set(std::size_t m, Matrix mat);

  /// Sum over the support.
  Matrix total() const;

  friend bool operator==(const MatrixSeq& a, const MatrixSeq& b);

 private:
  std::size_t dim_ = 0;
  std::map<std::size_t, Matrix> mats_;
};

/// Probability row vector over the states of the modulating chain.
struct StateDist {
  RowVector probs;

  std::size_t size() const { return static_cast<std::size_t>(probs.size()); }
  double operator[](std::size_t i) const { return probs(static_cast<Eigen::Index>(i)); }

  /// diag(pi)
  Matrix diag() const { return probs.transpose().asDiagonal(); }
};

struct Stationary {
  friend bool operator==(Stationary, Stationary) { return true; }
};

/// Either the stationary law of the chain or an explicit start vector.
using InitialLaw = std::variant<Stationary, std::vector<double>>;

/// Compound Markov binomial model: claim kernel Lambda(m)_ij =
/// P(C_k = m, J_k = j | J_{k-1} = i) plus the initial law of J_0.
struct ModelSpec {
  std::size_t n_states = 0;
  MatrixSeq claims;
  InitialLaw initial = Stationary{};

  bool stationary_start() const { return std::holds_alternative<Stationary>(initial); }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b);
};

enum class ViolationKind {
  kDimension,
  kEmptyKernel,
  kNegativeEntry,
  kRowSum,
  kZeroClaimNotPositive,
  kZeroClaimSingular,
  kNotErgodic,
  kInitialLaw,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Every violated invariant, in a fixed order. Empty means valid.
std::vector<Violation> validate(const ModelSpec& spec);

/// Throws ValidationError listing all violations, if any.
void require_valid(const ModelSpec& spec);

/// P = sum_m Lambda(m).
Matrix transition_matrix(const ModelSpec& spec);

/// True when P is irreducible and aperiodic (some power is strictly positive).
bool is_ergodic(const Matrix& p);

/// Solves pi P = pi, sum pi = 1 as one linear system.
/// Throws ComputationError("no unique stationary distribution") if P is not ergodic.
StateDist stationary_distribution(const Matrix& p);
StateDist stationary_distribution(const ModelSpec& spec);

/// Time-reversed model: Lambda~(m) = diag(pi)^-1 Lambda(m)^T diag(pi).
/// The initial law is carried over unchanged.
ModelSpec reverse(const ModelSpec& spec);
ModelSpec reverse(const ModelSpec& spec, const StateDist& pi);

/// diag(pi)^-1 A^T diag(pi)
Matrix conjugate_transpose(const Matrix& a, const StateDist& pi);

}  // namespace mbrisk
