#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "genbo/core.hpp"
#include "genbo/rng.hpp"

namespace genbo {

/// Mean-field categorical proposal: q(x | phi) = prod_m Categ(x_m | softmax(phi_m)).
/// Unconstrained logits; each row's softmax shift gauge is anchored by the
/// trainer's regularizer.
struct MeanFieldParams {
  Eigen::MatrixXd logits;  // positions x vocab

  int length() const { return static_cast<int>(logits.rows()); }
  int vocab_size() const { return static_cast<int>(logits.cols()); }

  static MeanFieldParams zeros(int m, int v);
  /// Small-noise i.i.d. Gaussian logits.
  static MeanFieldParams gaussian_init(int m, int v, double stddev, RngStream& rng);
};

/// Per-row log(sum(exp(logits))) with the usual max shift.
Eigen::VectorXd row_log_normalizers(const Eigen::MatrixXd& logits);

/// Row-wise softmax.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Exact log q(seq); no sampling involved.
double log_prob(const MeanFieldParams& params, const Sequence& seq);

/// B i.i.d. draws, every position sampled from its softmax row.
std::vector<Sequence> sample(const MeanFieldParams& params, RngStream& rng, int count);

/// d log q(seq) / d logits: row m is onehot(x_m) - softmax(phi_m).
Eigen::MatrixXd grad_log_prob(const MeanFieldParams& params, const Sequence& seq);

/// Reference density p0: uniform, or per-position categorical fitted to data.
class Prior {
 public:
  static Prior uniform(int m, int v);
  /// Additive smoothing: probs = (count + alpha) / (n + alpha * V).
  static Prior from_data(const Dataset& init, int m, int v, double smoothing = 1.0);

  double log_prob(const Sequence& seq) const;

  bool is_uniform() const { return uniform_; }
  int length() const { return m_; }
  int vocab_size() const { return v_; }
  /// Per-position log-probability table (materialized for both kinds).
  const Eigen::MatrixXd& log_probs() const { return log_probs_; }

 private:
  Prior(int m, int v, bool uniform, Eigen::MatrixXd log_probs);

  int m_ = 0;
  int v_ = 0;
  bool uniform_ = true;
  Eigen::MatrixXd log_probs_;
};

std::string params_to_json_string(const MeanFieldParams& params);
MeanFieldParams params_from_json_string(const std::string& text);

}  // namespace genbo
