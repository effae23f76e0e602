#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "mbrisk/risk_model.hpp"

namespace mbrisk {

/// SplitMix64: small 64-bit generator used for one stream per path.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Independent stream for path `index` of a run seeded with `seed`.
  static SplitMix64 for_path(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

enum class StartPolicy {
  kStationary,  ///< J_0 ~ pi
  kInitialLaw,  ///< J_0 from the model's initial law (pi unless given explicitly)
  kFixedState,
};

struct SimConfig {
  std::size_t paths = 1;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  long x0 = 0;
  StartPolicy start = StartPolicy::kStationary;
  std::size_t fixed_state = 0;
};

struct Estimate {
  double value = 0.0;
  /// sample standard deviation / sqrt(paths)
  double std_error = 0.0;
  std::size_t paths = 0;
};

/// One trajectory: states J_0..J_H, claims C_1..C_H (claims[0] unused, = 0),
/// levels X_0..X_H with X_k = x0 + k - S_k.
struct SamplePath {
  std::vector<std::size_t> states;
  std::vector<std::size_t> claims;
  std::vector<long> levels;
};

/// Path `index` of the run described by `cfg`. Depends only on
/// (model, cfg.seed, cfg.x0, start policy, index), never on scheduling.
SamplePath simulate_path(const RiskModel& model, const SimConfig& cfg, std::size_t index);

/// Visits paths 0..cfg.paths-1 in index order.
void simulate_paths(const RiskModel& model, const SimConfig& cfg,
                    const std::function<void(std::size_t, const SamplePath&)>& visit);

/// P(X_k > 0 for 1 <= k <= n); requires n <= cfg.horizon.
Estimate estimate_survival(const RiskModel& model, const SimConfig& cfg, std::size_t n);
/// Survival estimates for n = 1..cfg.horizon from one set of paths (element n-1).
std::vector<Estimate> estimate_survival_curve(const RiskModel& model, const SimConfig& cfg);

/// Element n (0..horizon) estimates P(tau^+ = n) for the level x0 + a.
std::vector<Estimate> estimate_hitting(const RiskModel& model, const SimConfig& cfg, std::size_t a);

/// P(S_k < k for 0 < k <= n | S_n = m) by rejection on {S_n = m}.
/// Throws ComputationError("insufficient conditioning mass") if no path is accepted.
Estimate estimate_ballot(const RiskModel& model, const SimConfig& cfg, std::size_t n, std::size_t m);

/// P(C_{t_0} = k_0, ..., C_{t_r} = k_r) for claim times t_i in 1..horizon.
Estimate estimate_joint_claims(const RiskModel& model, const SimConfig& cfg, const std::vector<std::size_t>& times,
                               const std::vector<std::size_t>& values);

/// Estimate of a Bernoulli mean from `hits` successes out of `trials`.
Estimate bernoulli_estimate(std::size_t hits, std::size_t trials);

}  // namespace mbrisk
