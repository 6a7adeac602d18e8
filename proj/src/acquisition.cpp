#include "genbo/acquisition.hpp"

#include <algorithm>
#include <cmath>

namespace genbo {

const char* utility_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::PI:
      return "pi";
    case UtilityKind::EI:
      return "ei";
    case UtilityKind::SEI:
      return "sei";
    case UtilityKind::SR:
      return "sr";
  }
  return "?";
}

UtilityKind utility_from_name(const std::string& name) {
  if (name == "pi") return UtilityKind::PI;
  if (name == "ei") return UtilityKind::EI;
  if (name == "sei") return UtilityKind::SEI;
  if (name == "sr") return UtilityKind::SR;
  throw ValidationError("unknown utility kind: " + name);
}

double softplus(double x) {
  // log(1 + e^x) without overflow for large |x|
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Utility::operator()(double y, double threshold) const {
  switch (kind) {
    case UtilityKind::PI:
      return y >= threshold ? 1.0 : 0.0;
    case UtilityKind::EI:
      return std::max(y - threshold, 0.0);
    case UtilityKind::SEI:
      return softplus(sharpness * (y - threshold)) / sharpness;
    case UtilityKind::SR:
      return y;
  }
  return 0.0;
}

double anneal_percentile(int t, const ThresholdSchedule& sched) {
  if (t < 0 || t > sched.total_rounds) {
    throw ValidationError("round index out of [0, T]");
  }
  if (sched.total_rounds == 0) return sched.p_end;
  double frac = static_cast<double>(t) / static_cast<double>(sched.total_rounds);
  return sched.p_start + (sched.p_end - sched.p_start) * frac;
}

double empirical_quantile(std::vector<double> ys, double p) {
  if (ys.empty()) throw EmptyDataError("empirical_quantile on empty data");
  std::sort(ys.begin(), ys.end());
  const auto n = ys.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  if (rank > 0) --rank;
  rank = std::min(rank, n - 1);
  return ys[rank];
}

double compute_threshold(const Dataset& dataset, int t, const ThresholdSchedule& sched) {
  return empirical_quantile(dataset.ys(), anneal_percentile(t, sched));
}

}  // namespace genbo
