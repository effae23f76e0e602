#include "mbrisk/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mbrisk/error.hpp"

namespace mbrisk {
namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Cumulative tables for the joint draw of (C_k, J_k) given J_{k-1} = i.
class StepSampler {
 public:
  explicit StepSampler(const RiskModel& model) {
    const std::size_t n = model.n_states();
    rows_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& [c, lam] : model.spec().claims.entries()) {
        for (std::size_t j = 0; j < n; ++j) {
          const double w = lam(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (w <= 0.0) continue;
          acc += w;
          rows_[i].push_back({acc, c, j});
        }
      }
    }
    pi_cdf_ = cumulative(model.pi().probs);
    law_cdf_ = cumulative(model.initial_law());
  }

  std::size_t initial(SplitMix64& rng, StartPolicy policy) const {
    const auto& cdf = policy == StartPolicy::kInitialLaw ? law_cdf_ : pi_cdf_;
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }

  std::pair<std::size_t, std::size_t> step(std::size_t state, SplitMix64& rng) const {
    const auto& row = rows_[state];
    const double u = rng.uniform() * row.back().cdf;
    auto it = std::upper_bound(row.begin(), row.end(), u, [](double x, const Outcome& o) { return x < o.cdf; });
    if (it == row.end()) --it;
    return {it->claim, it->state};
  }

 private:
  struct Outcome {
    double cdf;
    std::size_t claim;
    std::size_t state;
  };
  std::vector<std::vector<Outcome>> rows_;
  static std::vector<double> cumulative(const RowVector& p) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) cdf.push_back(acc += p(i));
    return cdf;
  }

  std::vector<double> pi_cdf_;
  std::vector<double> law_cdf_;
};

void check_config(const RiskModel& model, const SimConfig& cfg) {
  if (cfg.paths == 0) throw ValidationError("paths must be >= 1");
  if (cfg.horizon == 0) throw ValidationError("horizon must be >= 1");
  if (cfg.start == StartPolicy::kFixedState && cfg.fixed_state >= model.n_states()) {
    throw ValidationError("fixed start state out of range");
  }
}

void sample_into(const StepSampler& sampler, const SimConfig& cfg, std::size_t index, SamplePath& path) {
  SplitMix64 rng = SplitMix64::for_path(cfg.seed, index);
  const std::size_t h = cfg.horizon;
  path.states.resize(h + 1);
  path.claims.assign(h + 1, 0);
  path.levels.resize(h + 1);
  path.states[0] = cfg.start == StartPolicy::kFixedState ? cfg.fixed_state : sampler.initial(rng, cfg.start);
  path.levels[0] = cfg.x0;
  for (std::size_t k = 1; k <= h; ++k) {
    const auto [c, j] = sampler.step(path.states[k - 1], rng);
    path.claims[k] = c;
    path.states[k] = j;
    path.levels[k] = path.levels[k - 1] + 1 - static_cast<long>(c);
  }
}

template <typename Visit>
void run(const RiskModel& model, const SimConfig& cfg, Visit&& visit) {
  check_config(model, cfg);
  const StepSampler sampler(model);
  SamplePath path;
  for (std::size_t i = 0; i < cfg.paths; ++i) {
    sample_into(sampler, cfg, i, path);
    visit(i, path);
  }
}

}  // namespace

SplitMix64 SplitMix64::for_path(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
}

Estimate bernoulli_estimate(std::size_t hits, std::size_t trials) {
  Estimate e;
  e.paths = trials;
  if (trials == 0) return e;
  const double n = static_cast<double>(trials);
  e.value = static_cast<double>(hits) / n;
  if (trials > 1) {
    const double var = e.value * (1.0 - e.value) * n / (n - 1.0);
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

SamplePath simulate_path(const RiskModel& model, const SimConfig& cfg, std::size_t index) {
  check_config(model, cfg);
  SamplePath path;
  sample_into(StepSampler(model), cfg, index, path);
  return path;
}

void simulate_paths(const RiskModel& model, const SimConfig& cfg,
                    const std::function<void(std::size_t, const SamplePath&)>& visit) {
  run(model, cfg, visit);
}

std::vector<Estimate> estimate_survival_curve(const RiskModel& model, const SimConfig& cfg) {
  std::vector<std::size_t> alive(cfg.horizon + 1, 0);
  run(model, cfg, [&](std::size_t, const SamplePath& p) {
    for (std::size_t k = 1; k <= cfg.horizon; ++k) {
      if (p.levels[k] <= 0) return;
      ++alive[k];
    }
  });
  std::vector<Estimate> out;
  for (std::size_t k = 1; k <= cfg.horizon; ++k) out.push_back(bernoulli_estimate(alive[k], cfg.paths));
  return out;
}

Estimate estimate_survival(const RiskModel& model, const SimConfig& cfg, std::size_t n) {
  if (n == 0 || n > cfg.horizon) throw ValidationError("survival horizon must lie in 1..horizon");
  SimConfig short_cfg = cfg;
  short_cfg.horizon = n;
  return estimate_survival_curve(model, short_cfg).back();
}

std::vector<Estimate> estimate_hitting(const RiskModel& model, const SimConfig& cfg, std::size_t a) {
  if (a == 0) throw ValidationError("hitting level must be >= 1");
  std::vector<std::size_t> hits(cfg.horizon + 1, 0);
  const long target = cfg.x0 + static_cast<long>(a);
  run(model, cfg, [&](std::size_t, const SamplePath& p) {
    for (std::size_t k = 0; k <= cfg.horizon; ++k) {
      if (p.levels[k] >= target) {
        ++hits[k];
        return;
      }
    }
  });
  std::vector<Estimate> out;
  for (std::size_t k = 0; k <= cfg.horizon; ++k) out.push_back(bernoulli_estimate(hits[k], cfg.paths));
  return out;
}

Estimate estimate_ballot(const RiskModel& model, const SimConfig& cfg, std::size_t n, std::size_t m) {
  if (n == 0 || n > cfg.horizon) throw ValidationError("ballot horizon must lie in 1..horizon");
  std::size_t accepted = 0;
  std::size_t good = 0;
  run(model, cfg, [&](std::size_t, const SamplePath& p) {
    std::size_t s = 0;
    bool below = true;
    for (std::size_t k = 1; k <= n; ++k) {
      s += p.claims[k];
      below = below && s < k;
    }
    if (s != m) return;
    ++accepted;
    if (below) ++good;
  });
  if (accepted == 0) throw ComputationError("insufficient conditioning mass");
  return bernoulli_estimate(good, accepted);
}

Estimate estimate_joint_claims(const RiskModel& model, const SimConfig& cfg, const std::vector<std::size_t>& times,
                               const std::vector<std::size_t>& values) {
  if (times.empty() || times.size() != values.size()) {
    throw ValidationError("times and values must be non-empty and of equal length");
  }
  for (std::size_t t : times) {
    if (t == 0 || t > cfg.horizon) throw ValidationError("claim times must lie in 1..horizon");
  }
  std::size_t hits = 0;
  run(model, cfg, [&](std::size_t, const SamplePath& p) {
    for (std::size_t r = 0; r < times.size(); ++r) {
      if (p.claims[times[r]] != values[r]) return;
    }
    ++hits;
  });
  return bernoulli_estimate(hits, cfg.paths);
}

}  // namespace mbrisk
