#include "mbrisk/ruin.hpp"

#include <algorithm>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

void require_stationary(const RiskModel& model, const char* what) {
  if (!model.spec().stationary_start()) {
    throw ValidationError(std::string(what) + " requires stationary initial distribution");
  }
}

double weigh(const RiskModel& model, const Matrix& m) { return (model.pi().probs * m).sum(); }

Matrix sum_levels(const LevelTable& v, std::size_t n, std::size_t a_max, Eigen::Index d) {
  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t a = 1; a <= a_max; ++a) acc += v.at(n).at(a);
  return acc;
}

}  // namespace

std::string to_string(RuinMethod method) {
  switch (method) {
    case RuinMethod::kTakacs: return "takacs";
    case RuinMethod::kSeal: return "seal";
    case RuinMethod::kDistribution: return "distribution";
    case RuinMethod::kMonteCarlo: return "mc";
    case RuinMethod::kConstrainedDp: return "dp";
  }
  return "unknown";
}

std::optional<RuinMethod> parse_ruin_method(const std::string& name) {
  for (auto m : {RuinMethod::kTakacs, RuinMethod::kSeal, RuinMethod::kDistribution, RuinMethod::kMonteCarlo,
                 RuinMethod::kConstrainedDp}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

double takacs_survival(const RiskModel& model, std::size_t n) {
  require_stationary(model, "Takács formula");
  if (n == 0) throw ValidationError("horizon n must be >= 1");
  const MatrixSeq& conv = model.conv().nfold(n);
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    acc += static_cast<double>(n - m) * weigh(model, conv.at(m));
  }
  return acc / static_cast<double>(n);
}

std::vector<Matrix> ruin_time_dist(const RiskModel& model, std::size_t n_max, long x, const LevelTable& v) {
  require_stationary(model, "ruin-time distribution");
  if (x != 0 && x != 1) throw ValidationError("ruin-time distribution is available for x in {0, 1} only");
  const auto d = static_cast<Eigen::Index>(model.n_states());
  const Matrix& p = model.transition();
  const Matrix zero = model.spec().claims.at(0);
  std::vector<Matrix> out(n_max + 1, Matrix::Zero(d, d));
  if (x == 0) {
    if (n_max >= 1) out[1] = p - zero;
    for (std::size_t n = 2; n <= n_max; ++n) {
      out[n] = sum_levels(v, n - 1, n - 1, d) * p - sum_levels(v, n, n, d);
    }
  } else {
    const Eigen::PartialPivLU<Matrix> lu(zero);
    for (std::size_t n = 1; n <= n_max; ++n) {
      out[n] = lu.solve(sum_levels(v, n, n, d) * p - sum_levels(v, n + 1, n + 1, d));
    }
  }
  return out;
}

std::vector<Matrix> ruin_time_dist(const RiskModel& model, std::size_t n_max, long x) {
  const std::size_t need = x == 1 ? n_max + 1 : n_max;
  return ruin_time_dist(model, n_max, x, *model.v_table(need));
}

double seal_survival(const RiskModel& model, long x, std::size_t n, const LevelTable& v) {
  require_stationary(model, "Seal formula");
  if (x < 0) throw ValidationError("initial surplus x must be >= 0");
  if (n == 0) throw ValidationError("horizon n must be >= 1");
  const auto xs = static_cast<std::size_t>(x);
  const std::size_t last = xs + n - 1;
  const MatrixSeq& conv_n = model.conv().nfold(n);
  const auto d = static_cast<Eigen::Index>(model.n_states());

  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t i = 0; i <= last; ++i) acc += conv_n.at(i);
  for (std::size_t j = xs + 1; j <= last; ++j) {
    const Matrix lead = model.conv().at(j - xs, j);
    if (lead.isZero(0.0)) continue;
    Matrix inner = Matrix::Zero(d, d);
    for (std::size_t nu = j; nu <= last; ++nu) inner += v.at(n + xs - j).at(n + xs - nu);
    acc -= lead * inner;
  }
  return weigh(model, acc);
}

double seal_survival(const RiskModel& model, long x, std::size_t n) {
  return seal_survival(model, x, n, *model.v_table(n));
}

double seal_identity_residual(const RiskModel& model, std::size_t n, std::size_t m, const LevelTable& v) {
  if (m == 0 || m > n) throw ValidationError("identity requires 1 <= m <= n");
  Matrix acc = model.conv().at(n, n - m);
  for (std::size_t k = m; k <= n; ++k) acc -= model.conv().at(n - k, n - k) * v.at(k).at(m);
  return weigh(model, acc);
}

Eigen::VectorXd constrained_survival_by_state(const RiskModel& model, long x, std::size_t n) {
  if (x < 0) throw ValidationError("initial surplus x must be >= 0");
  const auto d = static_cast<Eigen::Index>(model.n_states());
  // alive[y] = P(X_k > 0 for k <= step, X_step = y, J_step = . | J_0 = .), y >= 1
  // (index 0 is the start level x, which may be 0).
  std::map<long, Matrix> alive;
  alive.emplace(x, Matrix::Identity(d, d));
  for (std::size_t k = 1; k <= n; ++k) {
    std::map<long, Matrix> next;
    for (const auto& [y, mass] : alive) {
      for (const auto& [c, lam] : model.spec().claims.entries()) {
        const long dest = y + 1 - static_cast<long>(c);
        if (dest <= 0) continue;
        auto [it, fresh] = next.try_emplace(dest, Matrix::Zero(d, d));
        it->second.noalias() += mass * lam;
      }
    }
    alive = std::move(next);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (const auto& [_, mass] : alive) out += mass.rowwise().sum();
  return out;
}

double constrained_survival(const RiskModel& model, long x, std::size_t n) {
  return model.initial_law().dot(constrained_survival_by_state(model, x, n));
}

Matrix phi_transform(const RiskModel& model, double v, long x) {
  require_stationary(model, "ruin transform");
  if (!(v > 0.0 && v < 1.0)) throw ValidationError("discount v must lie in (0, 1)");
  if (x != 0 && x != 1) throw ValidationError("ruin transform is available for x in {0, 1} only");
  const auto d = static_cast<Eigen::Index>(model.n_states());
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& p = model.transition();
  const Matrix zero = model.spec().claims.at(0);
  const Matrix r = lundberg_R(model.spec(), v).matrix;

  Eigen::FullPivLU<Matrix> lu(id - r);
  if (!lu.isInvertible()) throw ComputationError("singular (I - R_v): spectral radius of R_v is not below 1");
  const Matrix tail = lu.solve(r * (id / v - p));
  const Matrix phi1 = id - zero.partialPivLu().solve(tail);
  if (x == 1) return phi1;
  return v * (p - zero) + v * zero * phi1;
}

RuinReport ruin_report(const RiskModel& model, long x, std::size_t n_max, RuinMethod method) {
  RuinReport report;
  report.x = x;
  report.method = method;
  for (std::size_t n = 1; n <= n_max; ++n) report.horizons.push_back(n);

  switch (method) {
    case RuinMethod::kTakacs:
      if (x != 0) throw ValidationError("Takács formula applies to x = 0 only");
      for (std::size_t n : report.horizons) report.survival[n] = takacs_survival(model, n);
      break;
    case RuinMethod::kSeal: {
      const auto v = model.v_table(n_max);
      for (std::size_t n : report.horizons) report.survival[n] = seal_survival(model, x, n, *v);
      break;
    }
    case RuinMethod::kDistribution: {
      const auto dist = ruin_time_dist(model, n_max, x);
      double ruined = 0.0;
      for (std::size_t n : report.horizons) {
        ruined += weigh(model, dist[n]);
        report.survival[n] = 1.0 - ruined;
        report.ruin_time[n] = dist[n];
      }
      break;
    }
    case RuinMethod::kConstrainedDp:
      for (std::size_t n : report.horizons) report.survival[n] = constrained_survival(model, x, n);
      break;
    case RuinMethod::kMonteCarlo:
      throw ValidationError("Monte Carlo reports are produced by the montecarlo module");
  }
  return report;
}

}  // namespace mbrisk
