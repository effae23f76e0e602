#include "mbrisk/ballot.hpp"

#include "mbrisk/error.hpp"

namespace mbrisk {

double ballot_closed_form(std::size_t n, std::size_t m) {
  if (n == 0) throw ValidationError("horizon n must be >= 1");
  return m >= n ? 0.0 : 1.0 - static_cast<double>(m) / static_cast<double>(n);
}

double ballot_conditional(const RiskModel& model, std::size_t n, std::size_t m) {
  if (!model.spec().stationary_start()) {
    throw ValidationError("ballot identity requires stationary initial distribution");
  }
  if (n == 0) throw ValidationError("horizon n must be >= 1");
  const RowVector& pi = model.pi().probs;
  const double evidence = (pi * model.conv().at(n, m)).sum();
  if (!(evidence > 0.0)) throw ComputationError("conditioning event has zero probability");

  // mass[s] = P_pi(S_j < j for 0 < j <= k, S_k = s, J_k = .), s <= k - 1.
  const auto d = static_cast<Eigen::Index>(model.n_states());
  std::vector<RowVector> mass{pi};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<RowVector> next(k, RowVector::Zero(d));
    for (std::size_t s = 0; s < mass.size(); ++s) {
      if (mass[s].isZero(0.0)) continue;
      for (const auto& [c, lam] : model.spec().claims.entries()) {
        if (s + c >= k) break;
        next[s + c].noalias() += mass[s] * lam;
      }
    }
    mass = std::move(next);
  }
  const double joint = m < mass.size() ? mass[m].sum() : 0.0;
  return joint / evidence;
}

double joint_claim_prob(const RiskModel& model, const std::vector<std::size_t>& offsets, std::size_t start,
                        const std::vector<std::size_t>& values) {
  if (offsets.empty() || offsets.size() != values.size()) {
    throw ValidationError("offsets and values must be non-empty and of equal length");
  }
  if (!model.spec().stationary_start()) {
    throw ValidationError("chain formula requires stationary initial distribution");
  }
  if (start == 0) throw ValidationError("claim indices start at 1");
  for (std::size_t r = 1; r < offsets.size(); ++r) {
    if (offsets[r] <= offsets[r - 1]) throw ValidationError("offsets must be strictly increasing");
  }
  const MatrixSeq& claims = model.spec().claims;
  RowVector row = model.pi().probs * claims.at(values[0]);
  for (std::size_t r = 1; r < offsets.size(); ++r) {
    const auto gap = static_cast<int>(offsets[r] - offsets[r - 1] - 1);
    for (int g = 0; g < gap; ++g) row = row * model.transition();
    row = row * claims.at(values[r]);
  }
  return row.sum();
}

}  // namespace mbrisk
