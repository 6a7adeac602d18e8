#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "genbo/acquisition.hpp"
#include "genbo/core.hpp"
#include "genbo/proposal.hpp"

namespace genbo {

class AllZeroMassError : public Error {
 public:
  AllZeroMassError() : Error("target distribution has zero mass everywhere") {}
};

/// All sequences of V^M in lexicographic order. Guarded at 10^6 entries.
std::vector<Sequence> enumerate_domain(int m, int v);

/// Dense distribution over the full domain, indexed lexicographically.
struct ExactDistribution {
  int m = 0;
  int v = 0;
  std::vector<double> probs;

  static std::size_t index_of(const Sequence& seq, int v);
  double prob(const Sequence& seq) const { return probs[index_of(seq, v)]; }
};

enum class TargetMode { KL, Preference };

/// The density the proposal is trained to match:
///   KL mode:         p*(x) proportional to p0(x) * u(f(x), thr)
///   Preference mode: p*(x) proportional to p0(x) * exp(u(f(x), thr) / temperature)
ExactDistribution exact_target(const std::function<double(const Sequence&)>& objective, int m,
                               int v, const Utility& utility, double threshold,
                               const Prior& prior, double temperature, TargetMode mode);

/// Total variation distance between an exact distribution and the proposal.
double tv_distance(const ExactDistribution& p, const MeanFieldParams& q_params);

/// Lexicographically-first maximizer and its value.
std::pair<Sequence, double> exhaustive_argmax(
    const std::function<double(const Sequence&)>& objective, int m, int v);

}  // namespace genbo
