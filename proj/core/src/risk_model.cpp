#include "mbrisk/risk_model.hpp"

#include <mutex>

namespace mbrisk {

struct RiskModel::State {
  ModelSpec spec;
  Matrix p;
  StateDist pi;
  ModelSpec reversed;
  ConvCache conv;
  std::mutex mutex;
  std::shared_ptr<const LevelTable> v;

  explicit State(ModelSpec s)
      : spec(std::move(s)),
        p(transition_matrix(spec)),
        pi(stationary_distribution(p)),
        reversed(reverse(spec, pi)),
        conv(spec.claims) {}
};

namespace {
ModelSpec checked(ModelSpec spec) {
  require_valid(spec);
  return spec;
}
}  // namespace

RiskModel::RiskModel(ModelSpec spec) : state_(std::make_shared<State>(checked(std::move(spec)))) {}

const ModelSpec& RiskModel::spec() const { return state_->spec; }
const Matrix& RiskModel::transition() const { return state_->p; }
const StateDist& RiskModel::pi() const { return state_->pi; }
const ModelSpec& RiskModel::reversed() const { return state_->reversed; }
const ConvCache& RiskModel::conv() const { return state_->conv; }

RowVector RiskModel::initial_law() const {
  if (const auto* vec = std::get_if<std::vector<double>>(&state_->spec.initial)) {
    return Eigen::Map<const RowVector>(vec->data(), static_cast<Eigen::Index>(vec->size()));
  }
  return state_->pi.probs;
}

std::shared_ptr<const LevelTable> RiskModel::v_table(std::size_t n_max) const {
  std::lock_guard lock(state_->mutex);
  if (!state_->v || state_->v->size() < n_max + 1) {
    state_->v = std::make_shared<const LevelTable>(dp_V_levels(state_->spec, state_->pi, n_max));
  }
  return state_->v;
}

}  // namespace mbrisk
