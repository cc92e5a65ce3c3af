#include "vkge/optimizer.hpp"

#include <cmath>
#include <string>

#include "vkge/error.hpp"

namespace vkge {

void adam_update(std::span<double> params, std::span<const double> grads, AdamMoments& moments, std::uint64_t step,
                 const AdamConfig& config, std::optional<ClampRange> clamp) {
  if (grads.size() != params.size() || moments.first.size() != params.size() ||
      moments.second.size() != params.size()) {
    throw DimensionError("adam_update: parameter, gradient and moment sizes differ");
  }
  if (step == 0) throw UsageError("adam_update: step is 1-based");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) throw NumericError("non-finite gradient at index " + std::to_string(i));
  }
  const double b1 = config.beta1, b2 = config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = moments.first[i];
    double& v = moments.second[i];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    if (clamp) params[i] = std::fmin(std::fmax(params[i], clamp->lo), clamp->hi);
  }
}

TrainState TrainState::for_model(const VariationalModel& model) {
  TrainState state;
  for (const auto& t : model.tables()) {
    state.moments.emplace_back(t.means().size());
    state.moments.emplace_back(t.log_variances().size());
  }
  return state;
}

namespace {

void check_finite(const VariationalModel& model, std::size_t table, std::span<const double> grads,
                  const char* block) {
  const std::size_t d = model.width();
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (std::isfinite(grads[i])) continue;
    const auto sym = model.layout().symbol_at(table, i / d);
    throw NumericError(std::string("non-finite gradient in ") + block + " of " +
                       (sym.kind == SymbolKind::kEntity ? "entity " : "relation ") + std::to_string(sym.id) +
                       " (table " + std::to_string(table) + ", row " + std::to_string(i / d) + ", dim " +
                       std::to_string(i % d) + ")");
  }
}

}  // namespace

void adam_step(VariationalModel& model, const ModelGradients& descent, TrainState& state, const AdamConfig& config) {
  const auto tables = model.tables();
  if (descent.tables.size() != tables.size() || state.moments.size() != 2 * tables.size()) {
    throw DimensionError("adam_step: gradient or optimiser state does not match the model");
  }
  for (std::size_t t = 0; t < tables.size(); ++t) {
    check_finite(model, t, descent.tables[t].d_means, "means");
    check_finite(model, t, descent.tables[t].d_log_variances, "log-variances");
  }
  const std::uint64_t step = state.step + 1;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    adam_update(tables[t].means(), descent.tables[t].d_means, state.moments[2 * t], step, config);
    adam_update(tables[t].log_variances(), descent.tables[t].d_log_variances, state.moments[2 * t + 1], step, config,
                ClampRange{kMinLogVariance, kMaxLogVariance});
  }
  state.step = step;
}

}  // namespace vkge
