#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "genbo/core.hpp"
#include "genbo/proposal.hpp"
#include "genbo/rng.hpp"

namespace genbo {

enum class LossKind { PL, RPL, FKL, BFKL };

const char* loss_name(LossKind kind);
LossKind loss_from_name(const std::string& name);
bool is_preference_loss(LossKind kind);

struct LossSpec {
  LossKind kind = LossKind::RPL;
  double temperature = 1.0;  // PL/rPL
  double p_flip = 0.1;       // rPL; must be < 0.5
  bool use_importance_weights = false;  // fKL/bfKL

  void validate() const;
};

/// One training record: a sequence, its utility under the current threshold,
/// and the log-density it was sampled from (recorded at sampling time).
struct TrainExample {
  Sequence seq;
  double u = 0.0;
  double sampled_logp = 0.0;
};

struct PreferencePair {
  Sequence x1, x2;
  double u1 = 0.0, u2 = 0.0;
  int sign = 0;  // sign(u1 - u2), never 0
};

/// Shuffle, pair consecutive records, drop ties. Each record is used at
/// most once; an odd record count leaves one record unused.
std::vector<PreferencePair> make_pairs(std::span<const TrainExample> data, RngStream& rng);

class EmptyPairsError : public Error {
 public:
  EmptyPairsError() : Error("no preference pairs (all utilities tied?)") {}
};

class NegativeUtilityError : public Error {
 public:
  explicit NegativeUtilityError(double u)
      : Error("KL losses need nonnegative utilities, got " + std::to_string(u)) {}
};

class InvalidFlipError : public Error {
 public:
  explicit InvalidFlipError(double p)
      : Error("p_flip must be in [0, 0.5), got " + std::to_string(p)) {}
};

struct LossResult {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

/// Bradley-Terry preference loss:
///   sum_i -log sigmoid(temp * sign(du_i) * [(log q - log p0)(x_i1) - (log q - log p0)(x_i2)])
LossResult pl_loss(const MeanFieldParams& params, const Prior& prior,
                   std::span<const PreferencePair> pairs, double temperature);

/// Flip-debiased preference loss:
///   [(1 - p) * PL(du) - p * PL(-du)] / (1 - 2p) per pair.
LossResult rpl_loss(const MeanFieldParams& params, const Prior& prior,
                    std::span<const PreferencePair> pairs, double temperature, double p_flip);

/// Utility-weighted negative log-likelihood:
///   sum_i -w_i * u_i * log q(x_i),
/// w_i = p0(x_i) / q_sampled(x_i) when use_importance_weights, else 1.
LossResult fkl_loss(const MeanFieldParams& params, std::span<const TrainExample> data,
                    const Prior& prior, bool use_importance_weights);

/// fKL plus the density penalty sum_i q(x_i) / q_sampled(x_i), which keeps
/// pressure on zero-utility points.
LossResult bfkl_loss(const MeanFieldParams& params, std::span<const TrainExample> data,
                     const Prior& prior, bool use_importance_weights);

enum class RegKind { Quadratic, Exponential };

const char* reg_name(RegKind kind);
RegKind reg_from_name(const std::string& name);

/// lambda_n = lambda0 * ln(n)^2 / n.
double annealed_lambda(double n, double lambda0);

/// Anchors parameters to their initialization:
///   Quadratic:   lambda_n * |theta - theta0|^2
///   Exponential: lambda_n * exp(|theta - theta0|^2)
LossResult regularizer(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& theta0,
                       double n_observations, double lambda0, RegKind kind);

}  // namespace genbo
