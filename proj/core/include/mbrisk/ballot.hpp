#pragma once

#include <cstddef>
#include <vector>

#include "mbrisk/risk_model.hpp"

namespace mbrisk {

/// P_pi(S_k < k for all 0 < k <= n | S_n = m), computed by a dynamic program
/// over (partial claim sum, state) and divided by P_pi(S_n = m).
/// Under stationarity this equals max(0, 1 - m/n).
/// Throws ComputationError if P_pi(S_n = m) = 0.
double ballot_conditional(const RiskModel& model, std::size_t n, std::size_t m);

/// The closed form max(0, 1 - m/n).
double ballot_closed_form(std::size_t n, std::size_t m);

/// P_pi(C_{start+i_0} = k_0, ..., C_{start+i_r} = k_r) for strictly
/// increasing offsets, as the chain product
///   pi Lambda(k_0) P^{i_1 - i_0 - 1} Lambda(k_1) ... Lambda(k_r) e.
/// The value does not depend on `start` (>= 1).
double joint_claim_prob(const RiskModel& model, const std::vector<std::size_t>& offsets, std::size_t start,
                        const std::vector<std::size_t>& values);

}  // namespace mbrisk
