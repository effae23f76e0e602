#pragma once

#include <memory>

#include "mbrisk/algebra.hpp"
#include "mbrisk/hitting.hpp"
#include "mbrisk/model.hpp"

namespace mbrisk {

/// A validated model together with the quantities every ruin formula needs:
/// P, pi, the reversed model, the convolution memo and a growing table of the
/// reversed first-passage matrices V(n,a). Cheap to copy (shared state);
/// safe to share across threads.
class RiskModel {
 public:
  /// Throws ValidationError if `spec` violates any model invariant.
  explicit RiskModel(ModelSpec spec);

  const ModelSpec& spec() const;
  std::size_t n_states() const { return spec().n_states; }
  const Matrix& transition() const;
  const StateDist& pi() const;
  const ModelSpec& reversed() const;
  const ConvCache& conv() const;

  /// Law of J_0: pi or the explicit initial vector.
  RowVector initial_law() const;

  /// V(n,a) for 1 <= a <= n <= n_max via the reversed dynamic program.
  /// The returned table may be larger than requested.
  std::shared_ptr<const LevelTable> v_table(std::size_t n_max) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

}  // namespace mbrisk
