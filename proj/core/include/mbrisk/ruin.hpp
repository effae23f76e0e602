#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbrisk/hitting.hpp"
#include "mbrisk/risk_model.hpp"

namespace mbrisk {

enum class RuinMethod {
  kTakacs,        ///< ballot-based closed form, x = 0 only
  kSeal,          ///< reversed first-passage closed form, any x >= 0
  kDistribution,  ///< cumulative ruin-time distribution, x in {0, 1}
  kMonteCarlo,
  kConstrainedDp, ///< direct path dynamic program (oracle)
};

std::string to_string(RuinMethod method);
/// Accepts "takacs", "seal", "distribution", "mc", "dp".
std::optional<RuinMethod> parse_ruin_method(const std::string& name);

/// Survival probabilities P_{pi,x}(tau_0^- >= n + 1) for a set of horizons.
struct RuinReport {
  long x = 0;
  RuinMethod method = RuinMethod::kSeal;
  std::vector<std::size_t> horizons;
  std::map<std::size_t, double> survival;
  /// Monte Carlo only.
  std::map<std::size_t, double> std_error;
  /// Distribution method only: P(tau_0^- = n, J_n) per start state.
  std::map<std::size_t, Matrix> ruin_time;
};

/// Survival up to n with zero initial surplus:
///   (1/n) sum_{m=0}^{n-1} (n - m) pi Lambda^{*n}(m) e.
/// Throws ValidationError unless the model starts from its stationary law.
double takacs_survival(const RiskModel& model, std::size_t n);

/// Element n (1 <= n <= n_max) is P(tau_0^- = n, J_n | J_0) for initial
/// surplus x in {0, 1}; element 0 is zero.
std::vector<Matrix> ruin_time_dist(const RiskModel& model, std::size_t n_max, long x);
std::vector<Matrix> ruin_time_dist(const RiskModel& model, std::size_t n_max, long x, const LevelTable& v);

/// Survival up to n from surplus x >= 0:
///   pi ( sum_{i=0}^{x+n-1} Lambda^{*n}(i)
///        - sum_{j=x+1}^{x+n-1} sum_{nu=j}^{x+n-1} Lambda^{*(j-x)}(j) V(n+x-j, n+x-nu) ) e.
/// The overload taking `v` uses the supplied V(k,m) table (k <= n - 1).
double seal_survival(const RiskModel& model, long x, std::size_t n);
double seal_survival(const RiskModel& model, long x, std::size_t n, const LevelTable& v);

/// Residual of pi (Lambda^{*n}(n-m) - sum_{k=m}^{n} Lambda^{*(n-k)}(n-k) V(k,m)) e,
/// which vanishes for 1 <= m <= n.
double seal_identity_residual(const RiskModel& model, std::size_t n, std::size_t m, const LevelTable& v);

/// Direct dynamic program for P(X_k > 0 for 1 <= k <= n | X_0 = x) under the
/// model's initial law.
double constrained_survival(const RiskModel& model, long x, std::size_t n);
/// Same quantity per start state (entry i conditions on J_0 = i).
Eigen::VectorXd constrained_survival_by_state(const RiskModel& model, long x, std::size_t n);

/// Phi(x) = E_x(v^{tau_0^-}; tau_0^- < infinity, J_{tau_0^-}) for x in {0, 1}:
///   Phi(1) = I - Lambda(0)^-1 (I - R_v)^-1 R_v (v^-1 I - P),
///   Phi(0) = v (P - Lambda(0)) + v Lambda(0) Phi(1).
/// Requires v in (0, 1).
Matrix phi_transform(const RiskModel& model, double v, long x);

/// Survival table for horizons 1..n_max with a deterministic method.
RuinReport ruin_report(const RiskModel& model, long x, std::size_t n_max, RuinMethod method);

}  // namespace mbrisk
