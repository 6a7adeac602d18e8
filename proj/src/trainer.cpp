#include "genbo/trainer.hpp"

#include <cmath>
#include <sstream>

namespace genbo {

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw ValidationError("learning_rate must be > 0");
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (adam_beta1 < 0 || adam_beta1 >= 1 || adam_beta2 < 0 || adam_beta2 >= 1) {
    throw ValidationError("adam betas must be in [0, 1)");
  }
  if (adam_eps <= 0) throw ValidationError("adam_eps must be > 0");
  if (grad_clip_norm <= 0) throw ValidationError("grad_clip_norm must be > 0");
}

AdamState AdamState::zeros(int rows, int cols) {
  return AdamState{Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols), 0};
}

void adam_step(AdamState& state, Eigen::MatrixXd& params, const Eigen::MatrixXd& grad,
               double lr, const TrainConfig& config) {
  state.step += 1;
  state.m = config.adam_beta1 * state.m + (1.0 - config.adam_beta1) * grad;
  state.v = config.adam_beta2 * state.v + (1.0 - config.adam_beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.step));
  const Eigen::MatrixXd mhat = state.m / bc1;
  const Eigen::MatrixXd vhat = state.v / bc2;
  params.array() -= lr * mhat.array() / (vhat.array().sqrt() + config.adam_eps);
}

namespace {

LossResult evaluate_objective(const MeanFieldParams& params, const LossSpec& spec,
                              std::span<const TrainExample> data, const Prior& prior,
                              const Eigen::MatrixXd& theta0, double n_observations,
                              double reg_lambda0, RegKind reg_kind, RngStream& rng) {
  LossResult loss;
  switch (spec.kind) {
    case LossKind::PL:
    case LossKind::RPL: {
      auto pairs = make_pairs(data, rng);
      if (pairs.empty()) {
        // A shuffle can leave every drawn pair tied; that epoch contributes
        // only the regularizer.
        loss.value = 0.0;
        loss.grad = Eigen::MatrixXd::Zero(params.length(), params.vocab_size());
      } else if (spec.kind == LossKind::PL) {
        loss = pl_loss(params, prior, pairs, spec.temperature);
      } else {
        loss = rpl_loss(params, prior, pairs, spec.temperature, spec.p_flip);
      }
      break;
    }
    case LossKind::FKL:
      loss = fkl_loss(params, data, prior, spec.use_importance_weights);
      break;
    case LossKind::BFKL:
      loss = bfkl_loss(params, data, prior, spec.use_importance_weights);
      break;
  }
  LossResult reg = regularizer(params.logits, theta0, n_observations, reg_lambda0, reg_kind);
  loss.value += reg.value;
  loss.grad += reg.grad;
  return loss;
}

void clip_to_norm(Eigen::MatrixXd& grad, double max_norm) {
  const double norm = grad.norm();
  if (norm > max_norm && norm > 0) grad *= max_norm / norm;
}

}  // namespace

FitResult fit(MeanFieldParams& params, const LossSpec& spec,
              std::span<const TrainExample> data, const Prior& prior,
              const Eigen::MatrixXd& theta0, double n_observations, double reg_lambda0,
              RegKind reg_kind, const TrainConfig& config, RngStream& rng) {
  config.validate();
  spec.validate();
  if (data.empty()) throw EmptyDataError("fit on empty data");
  if (!config.warm_start) params.logits = theta0;

  AdamState adam = AdamState::zeros(params.length(), params.vocab_size());
  FitResult result;
  result.grad_norms.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    LossResult obj = evaluate_objective(params, spec, data, prior, theta0, n_observations,
                                        reg_lambda0, reg_kind, rng);
    if (!std::isfinite(obj.value) || !obj.grad.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite objective at epoch " << epoch << ": value=" << obj.value
          << " grad_norm=" << obj.grad.norm() << " params_norm=" << params.logits.norm();
      throw NonFiniteLossError(msg.str());
    }
    if (epoch == 0) result.initial_loss = obj.value;
    clip_to_norm(obj.grad, config.grad_clip_norm);
    result.grad_norms.push_back(obj.grad.norm());
    adam_step(adam, params.logits, obj.grad, config.learning_rate, config);
  }

  LossResult final_obj = evaluate_objective(params, spec, data, prior, theta0, n_observations,
                                            reg_lambda0, reg_kind, rng);
  result.final_loss = final_obj.value;
  result.final_grad_norm = final_obj.grad.norm();
  result.epochs_run = config.epochs;
  return result;
}

}  // namespace genbo
