#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "genbo/losses.hpp"
#include "genbo/proposal.hpp"
#include "genbo/rng.hpp"

namespace genbo {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 200;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double grad_clip_norm = 10.0;
  bool warm_start = true;

  void validate() const;
};

struct AdamState {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
  long step = 0;

  static AdamState zeros(int rows, int cols);
};

/// One bias-corrected Adam update; params are modified in place.
void adam_step(AdamState& state, Eigen::MatrixXd& params, const Eigen::MatrixXd& grad,
               double lr, const TrainConfig& config);

struct FitResult {
  double initial_loss = 0.0;    // objective before the first step
  double final_loss = 0.0;      // objective after the last step
  double final_grad_norm = 0.0;
  std::vector<double> grad_norms;
  int epochs_run = 0;
};

/// Full-batch Adam on loss + regularizer for config.epochs steps. Preference
/// losses re-pair the data every epoch using rng. warm_start=false resets
/// params to theta0 first.
FitResult fit(MeanFieldParams& params, const LossSpec& spec,
              std::span<const TrainExample> data, const Prior& prior,
              const Eigen::MatrixXd& theta0, double n_observations, double reg_lambda0,
              RegKind reg_kind, const TrainConfig& config, RngStream& rng);

}  // namespace genbo
