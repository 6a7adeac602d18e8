#include "genbo/proposal.hpp"

#include <cmath>

#include "json.hpp"

namespace genbo {

MeanFieldParams MeanFieldParams::zeros(int m, int v) {
  return MeanFieldParams{Eigen::MatrixXd::Zero(m, v)};
}

MeanFieldParams MeanFieldParams::gaussian_init(int m, int v, double stddev, RngStream& rng) {
  Eigen::MatrixXd logits(m, v);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < v; ++j) logits(i, j) = stddev * rng.normal();
  }
  return MeanFieldParams{std::move(logits)};
}

Eigen::VectorXd row_log_normalizers(const Eigen::MatrixXd& logits) {
  Eigen::VectorXd out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double mx = logits.row(i).maxCoeff();
    out(i) = mx + std::log((logits.row(i).array() - mx).exp().sum());
  }
  return out;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double mx = logits.row(i).maxCoeff();
    Eigen::ArrayXd e = (logits.row(i).array() - mx).exp();
    out.row(i) = (e / e.sum()).matrix();
  }
  return out;
}

double log_prob(const MeanFieldParams& params, const Sequence& seq) {
  if (seq.size() != params.length()) {
    throw ValidationError("sequence length does not match proposal length");
  }
  Eigen::VectorXd logz = row_log_normalizers(params.logits);
  double lp = 0.0;
  for (int m = 0; m < seq.size(); ++m) {
    lp += params.logits(m, seq[m]) - logz(m);
  }
  return lp;
}

std::vector<Sequence> sample(const MeanFieldParams& params, RngStream& rng, int count) {
  if (count < 1) throw ValidationError("sample count must be >= 1");
  const int m = params.length();
  const int v = params.vocab_size();
  Eigen::MatrixXd probs = softmax_rows(params.logits);
  std::vector<Sequence> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int b = 0; b < count; ++b) {
    std::vector<int> tokens(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      double u = rng.uniform();
      double acc = 0.0;
      int pick = v - 1;
      for (int j = 0; j < v; ++j) {
        acc += probs(i, j);
        if (u < acc) {
          pick = j;
          break;
        }
      }
      tokens[static_cast<std::size_t>(i)] = pick;
    }
    out.emplace_back(std::move(tokens));
  }
  return out;
}

Eigen::MatrixXd grad_log_prob(const MeanFieldParams& params, const Sequence& seq) {
  if (seq.size() != params.length()) {
    throw ValidationError("sequence length does not match proposal length");
  }
  Eigen::MatrixXd grad = -softmax_rows(params.logits);
  for (int m = 0; m < seq.size(); ++m) grad(m, seq[m]) += 1.0;
  return grad;
}

Prior::Prior(int m, int v, bool uniform, Eigen::MatrixXd log_probs)
    : m_(m), v_(v), uniform_(uniform), log_probs_(std::move(log_probs)) {}

Prior Prior::uniform(int m, int v) {
  if (m < 1 || v < 2) throw ValidationError("prior dimensions invalid");
  Eigen::MatrixXd lp = Eigen::MatrixXd::Constant(m, v, -std::log(static_cast<double>(v)));
  return Prior(m, v, true, std::move(lp));
}

Prior Prior::from_data(const Dataset& init, int m, int v, double smoothing) {
  if (init.empty()) throw EmptyDataError("prior_from_data on empty dataset");
  if (smoothing < 0) throw ValidationError("smoothing must be >= 0");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Constant(m, v, smoothing);
  for (const auto& rec : init.records()) {
    if (rec.seq.size() != m) throw ValidationError("record length does not match prior length");
    for (int i = 0; i < m; ++i) counts(i, rec.seq[i]) += 1.0;
  }
  const double denom = static_cast<double>(init.size()) + smoothing * v;
  if (smoothing == 0.0 && (counts.array() == 0.0).any()) {
    throw ValidationError("prior_from_data with smoothing 0 needs every symbol observed");
  }
  Eigen::MatrixXd lp = (counts.array() / denom).log().matrix();
  return Prior(m, v, false, std::move(lp));
}

double Prior::log_prob(const Sequence& seq) const {
  if (seq.size() != m_) throw ValidationError("sequence length does not match prior length");
  if (uniform_) return -static_cast<double>(m_) * std::log(static_cast<double>(v_));
  double lp = 0.0;
  for (int i = 0; i < m_; ++i) lp += log_probs_(i, seq[i]);
  return lp;
}

std::string params_to_json_string(const MeanFieldParams& params) {
  nlohmann::json j;
  j["rows"] = params.length();
  j["cols"] = params.vocab_size();
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(params.length()));
  for (int i = 0; i < params.length(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(params.vocab_size()));
    for (int jcol = 0; jcol < params.vocab_size(); ++jcol) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(jcol)] = params.logits(i, jcol);
    }
  }
  j["logits"] = rows;
  return j.dump();
}

MeanFieldParams params_from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  auto data = j.at("logits").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(data.size()) != rows) throw ValidationError("params json: row mismatch");
  Eigen::MatrixXd logits(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(data[static_cast<std::size_t>(i)].size()) != cols) {
      throw ValidationError("params json: col mismatch");
    }
    for (int c = 0; c < cols; ++c) {
      logits(i, c) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
  }
  return MeanFieldParams{std::move(logits)};
}

}  // namespace genbo
