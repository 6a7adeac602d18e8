#include "genbo/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genbo/acquisition.hpp"

namespace genbo {

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::PL:
      return "pl";
    case LossKind::RPL:
      return "rpl";
    case LossKind::FKL:
      return "fkl";
    case LossKind::BFKL:
      return "bfkl";
  }
  return "?";
}

LossKind loss_from_name(const std::string& name) {
  if (name == "pl") return LossKind::PL;
  if (name == "rpl") return LossKind::RPL;
  if (name == "fkl") return LossKind::FKL;
  if (name == "bfkl") return LossKind::BFKL;
  throw ValidationError("unknown loss kind: " + name);
}

bool is_preference_loss(LossKind kind) {
  return kind == LossKind::PL || kind == LossKind::RPL;
}

void LossSpec::validate() const {
  if (temperature <= 0) throw ValidationError("loss temperature must be > 0");
  if (p_flip < 0 || p_flip >= 0.5) throw InvalidFlipError(p_flip);
}

std::vector<PreferencePair> make_pairs(std::span<const TrainExample> data, RngStream& rng) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  std::vector<PreferencePair> pairs;
  pairs.reserve(data.size() / 2);
  for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
    const auto& a = data[order[i]];
    const auto& b = data[order[i + 1]];
    if (a.u == b.u) continue;  // sign undefined for ties
    pairs.push_back(PreferencePair{a.seq, b.seq, a.u, b.u, a.u > b.u ? 1 : -1});
  }
  return pairs;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

/// Logit difference h = (log q - log p0)(x1) - (log q - log p0)(x2).
/// Softmax normalizers cancel within a pair, so only raw logits appear.
double pair_margin(const MeanFieldParams& params, const Prior& prior,
                   const PreferencePair& pair) {
  double h = 0.0;
  for (int m = 0; m < pair.x1.size(); ++m) {
    h += params.logits(m, pair.x1[m]) - params.logits(m, pair.x2[m]);
  }
  h -= prior.log_prob(pair.x1) - prior.log_prob(pair.x2);
  return h;
}

/// Shared core for PL and rPL. Evaluating -log sigmoid(tau*s*h) at the pair's
/// sign and at the flipped sign costs the same margin computation, so both
/// branch weights are applied here: value += c_keep * l(z) + c_swap * l(-z)
/// with l(z) = softplus(-z).
LossResult preference_loss(const MeanFieldParams& params, const Prior& prior,
                           std::span<const PreferencePair> pairs, double temperature,
                           double c_keep, double c_swap) {
  if (pairs.empty()) throw EmptyPairsError();
  if (temperature <= 0) throw ValidationError("loss temperature must be > 0");
  LossResult out;
  out.grad = Eigen::MatrixXd::Zero(params.length(), params.vocab_size());
  for (const auto& pair : pairs) {
    const double z = temperature * static_cast<double>(pair.sign) * pair_margin(params, prior, pair);
    out.value += c_keep * softplus(-z) + c_swap * softplus(z);
    // d/dz softplus(-z) = -sigmoid(-z); d/dz softplus(z) = sigmoid(z)
    const double dz = -c_keep * sigmoid(-z) + c_swap * sigmoid(z);
    const double coeff = dz * temperature * static_cast<double>(pair.sign);
    for (int m = 0; m < pair.x1.size(); ++m) {
      out.grad(m, pair.x1[m]) += coeff;
      out.grad(m, pair.x2[m]) -= coeff;
    }
  }
  return out;
}

}  // namespace

LossResult pl_loss(const MeanFieldParams& params, const Prior& prior,
                   std::span<const PreferencePair> pairs, double temperature) {
  return preference_loss(params, prior, pairs, temperature, 1.0, 0.0);
}

LossResult rpl_loss(const MeanFieldParams& params, const Prior& prior,
                    std::span<const PreferencePair> pairs, double temperature, double p_flip) {
  if (p_flip < 0 || p_flip >= 0.5) throw InvalidFlipError(p_flip);
  const double denom = 1.0 - 2.0 * p_flip;
  return preference_loss(params, prior, pairs, temperature, (1.0 - p_flip) / denom,
                         -p_flip / denom);
}

namespace {

/// Accumulates sum_i c_i * grad_log_prob(x_i) without materializing
/// per-record gradients: the onehot parts scatter into the grad and the
/// shared softmax part is applied once per row with the row's total weight.
struct GradAccumulator {
  Eigen::MatrixXd scatter;
  double total = 0.0;

  explicit GradAccumulator(int m, int v) : scatter(Eigen::MatrixXd::Zero(m, v)) {}

  void add(const Sequence& seq, double c) {
    for (int m = 0; m < seq.size(); ++m) scatter(m, seq[m]) += c;
    total += c;
  }

  void apply(const Eigen::MatrixXd& softmax, Eigen::MatrixXd& grad) const {
    grad += scatter;
    grad -= total * softmax;
  }
};

}  // namespace

LossResult fkl_loss(const MeanFieldParams& params, std::span<const TrainExample> data,
                    const Prior& prior, bool use_importance_weights) {
  if (data.empty()) throw EmptyDataError("fkl_loss on empty data");
  const int m = params.length();
  const int v = params.vocab_size();
  const Eigen::VectorXd logz = row_log_normalizers(params.logits);
  const Eigen::MatrixXd probs = softmax_rows(params.logits);

  LossResult out;
  out.grad = Eigen::MatrixXd::Zero(m, v);
  GradAccumulator acc(m, v);
  for (const auto& ex : data) {
    if (ex.u < 0) throw NegativeUtilityError(ex.u);
    double w = 1.0;
    if (use_importance_weights) {
      w = std::exp(prior.log_prob(ex.seq) - ex.sampled_logp);
    }
    const double c = w * ex.u;
    if (c == 0.0) continue;
    double lq = 0.0;
    for (int i = 0; i < ex.seq.size(); ++i) lq += params.logits(i, ex.seq[i]) - logz(i);
    out.value -= c * lq;
    acc.add(ex.seq, -c);
  }
  acc.apply(probs, out.grad);
  return out;
}

LossResult bfkl_loss(const MeanFieldParams& params, std::span<const TrainExample> data,
                     const Prior& prior, bool use_importance_weights) {
  LossResult out = fkl_loss(params, data, prior, use_importance_weights);
  const Eigen::VectorXd logz = row_log_normalizers(params.logits);
  const Eigen::MatrixXd probs = softmax_rows(params.logits);
  GradAccumulator acc(params.length(), params.vocab_size());
  for (const auto& ex : data) {
    double lq = 0.0;
    for (int i = 0; i < ex.seq.size(); ++i) lq += params.logits(i, ex.seq[i]) - logz(i);
    const double ratio = std::exp(lq - ex.sampled_logp);
    out.value += ratio;
    acc.add(ex.seq, ratio);
  }
  acc.apply(probs, out.grad);
  return out;
}

const char* reg_name(RegKind kind) {
  return kind == RegKind::Quadratic ? "quadratic" : "exp";
}

RegKind reg_from_name(const std::string& name) {
  if (name == "quadratic") return RegKind::Quadratic;
  if (name == "exp") return RegKind::Exponential;
  throw ValidationError("unknown regularizer kind: " + name);
}

double annealed_lambda(double n, double lambda0) {
  if (n < 1) throw ValidationError("regularizer needs n >= 1");
  const double ln = std::log(n);
  return lambda0 * ln * ln / n;
}

LossResult regularizer(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& theta0,
                       double n_observations, double lambda0, RegKind kind) {
  const double lambda = annealed_lambda(n_observations, lambda0);
  LossResult out;
  const Eigen::MatrixXd diff = theta - theta0;
  const double sq = diff.squaredNorm();
  if (kind == RegKind::Quadratic) {
    out.value = lambda * sq;
    out.grad = 2.0 * lambda * diff;
  } else {
    const double e = std::exp(sq);
    out.value = lambda * e;
    out.grad = 2.0 * lambda * e * diff;
  }
  return out;
}

}  // namespace genbo
