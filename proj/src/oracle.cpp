#include "genbo/oracle.hpp"

#include <cmath>

namespace genbo {

namespace {

constexpr std::size_t kMaxDomain = 1000000;

std::size_t checked_domain_size(int m, int v) {
  if (m < 1 || v < 2) throw ValidationError("domain dimensions invalid");
  std::size_t size = 1;
  for (int i = 0; i < m; ++i) {
    if (size > kMaxDomain / static_cast<std::size_t>(v)) {
      throw DomainTooLargeError("domain " + std::to_string(v) + "^" + std::to_string(m) +
                                " exceeds " + std::to_string(kMaxDomain));
    }
    size *= static_cast<std::size_t>(v);
  }
  if (size > kMaxDomain) {
    throw DomainTooLargeError("domain exceeds " + std::to_string(kMaxDomain));
  }
  return size;
}

}  // namespace

std::vector<Sequence> enumerate_domain(int m, int v) {
  const std::size_t size = checked_domain_size(m, v);
  std::vector<Sequence> out;
  out.reserve(size);
  std::vector<int> tokens(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < size; ++i) {
    out.emplace_back(tokens);
    // odometer increment, least significant at the back: lexicographic order
    for (int pos = m - 1; pos >= 0; --pos) {
      if (++tokens[static_cast<std::size_t>(pos)] < v) break;
      tokens[static_cast<std::size_t>(pos)] = 0;
    }
  }
  return out;
}

std::size_t ExactDistribution::index_of(const Sequence& seq, int v) {
  std::size_t idx = 0;
  for (int t : seq.tokens) idx = idx * static_cast<std::size_t>(v) + static_cast<std::size_t>(t);
  return idx;
}

ExactDistribution exact_target(const std::function<double(const Sequence&)>& objective, int m,
                               int v, const Utility& utility, double threshold,
                               const Prior& prior, double temperature, TargetMode mode) {
  if (mode == TargetMode::Preference && temperature <= 0) {
    throw ValidationError("preference target needs temperature > 0");
  }
  const auto domain = enumerate_domain(m, v);
  ExactDistribution dist;
  dist.m = m;
  dist.v = v;
  dist.probs.resize(domain.size());
  double total = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const double u = utility(objective(domain[i]), threshold);
    const double p0 = std::exp(prior.log_prob(domain[i]));
    const double w = mode == TargetMode::KL ? p0 * u : p0 * std::exp(u / temperature);
    if (w < 0 || !std::isfinite(w)) {
      throw ValidationError("target weight must be finite and nonnegative");
    }
    dist.probs[i] = w;
    total += w;
  }
  if (total <= 0) throw AllZeroMassError();
  for (auto& p : dist.probs) p /= total;
  return dist;
}

double tv_distance(const ExactDistribution& p, const MeanFieldParams& q_params) {
  if (p.m != q_params.length() || p.v != q_params.vocab_size()) {
    throw ValidationError("tv_distance: domain mismatch");
  }
  const auto domain = enumerate_domain(p.m, p.v);
  double acc = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    acc += std::abs(p.probs[i] - std::exp(log_prob(q_params, domain[i])));
  }
  return 0.5 * acc;
}

std::pair<Sequence, double> exhaustive_argmax(
    const std::function<double(const Sequence&)>& objective, int m, int v) {
  const auto domain = enumerate_domain(m, v);
  Sequence best = domain.front();
  double best_value = objective(best);
  for (std::size_t i = 1; i < domain.size(); ++i) {
    const double value = objective(domain[i]);
    if (value > best_value) {  // strict: ties keep the lexicographically first
      best_value = value;
      best = domain[i];
    }
  }
  return {best, best_value};
}

}  // namespace genbo
