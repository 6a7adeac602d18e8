#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genbo/acquisition.hpp"
#include "genbo/blackbox.hpp"
#include "genbo/core.hpp"
#include "genbo/losses.hpp"
#include "genbo/proposal.hpp"
#include "genbo/trainer.hpp"

namespace genbo {

enum class Method { GenBO, RandomMutation };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

enum class PriorMode { NoPrior, FromInitData };

struct AlohaSpec {
  std::string target = "ALOHA";
  std::string vocab = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  int min_init_edit_distance = 4;  // <= 0 disables the constraint
};

struct EhrlichSpec {
  int length = 15;
  int num_motifs = 2;
  int motif_length = 4;
  int quantization = 4;
  std::uint64_t task_seed = 0;
  std::string instance_path;  // optional: load instead of sampling
};

struct TaskSpec {
  enum class Kind { Aloha, Ehrlich };
  Kind kind = Kind::Aloha;
  AlohaSpec aloha;
  EhrlichSpec ehrlich;
};

struct ExperimentConfig {
  TaskSpec task;
  Method method = Method::GenBO;
  LossSpec loss;
  Utility utility;
  PriorMode prior_mode = PriorMode::NoPrior;
  double prior_smoothing = 1.0;
  bool cbas_last_batch_only = false;
  int rounds = 10;      // T
  int batch_size = 8;   // B
  int init_size = 64;   // |D0|
  double noise_sigma = 0.0;
  TrainConfig train;
  ThresholdSchedule schedule;  // total_rounds kept in sync with rounds
  RegKind reg_kind = RegKind::Quadratic;
  double reg_lambda0 = 0.1;
  double init_logit_stddev = 0.01;

  void validate() const;          // throws ValidationError
  std::string method_label() const;
};

struct RunResult {
  std::string method_label;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  double initial_best_y = 0.0;
  double initial_regret = 0.0;
  double wall_time_s = 0.0;
  MeanFieldParams final_params;  // GenBO only; empty for baselines
};

/// f_star - best_y, snapped to zero when negative only by rounding error.
double simple_regret(double best_y, double f_star);

/// Uniform random sequences; with min_edit_distance set (ALOHA), rejection
/// sampling keeps only members at distance >= the bound from the target.
/// Records carry round 0 and the uniform sampling log-density.
Dataset init_dataset(const BlackBox& bb, int size, RngStream& rng,
                     std::optional<int> min_edit_distance = std::nullopt);

/// Builds the black box for a config (samples or loads the Ehrlich instance).
BlackBox make_blackbox(const ExperimentConfig& config);

/// One (config, seed) run. Keeps full state so tests can drive it round by
/// round.
class Engine {
 public:
  Engine(const ExperimentConfig& config, const BlackBox& bb, std::uint64_t seed);

  RoundRecord run_round(int t);  // t in [1, T]
  RunResult run_all();

  const Dataset& dataset() const { return data_; }
  const MeanFieldParams& params() const { return params_; }
  const Prior& prior() const { return prior_; }
  double best_y() const { return best_y_; }

 private:
  std::vector<TrainExample> training_slice(int t, double threshold) const;
  std::vector<Sequence> propose_batch(int t);
  std::vector<Sequence> mutate_batch(int t);

  const ExperimentConfig& config_;
  const BlackBox& bb_;
  std::uint64_t seed_;
  Dataset data_;
  Prior prior_;
  MeanFieldParams params_;
  Eigen::MatrixXd theta0_;
  std::vector<double> batch_logp_;  // log q of the batch just proposed
  double best_y_ = 0.0;
  double last_fit_loss_ = 0.0;
};

RunResult run_experiment(const ExperimentConfig& config, const BlackBox& bb,
                         std::uint64_t seed);

}  // namespace genbo
