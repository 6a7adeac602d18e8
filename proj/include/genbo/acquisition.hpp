#pragma once

#include <string>
#include <vector>

#include "genbo/core.hpp"

namespace genbo {

enum class UtilityKind { PI, EI, SEI, SR };

const char* utility_name(UtilityKind kind);
UtilityKind utility_from_name(const std::string& name);

/// Scalar reward computed directly from an observation.
///   PI:  1[y >= thr]
///   EI:  max(y - thr, 0)
///   sEI: softplus(sharpness * (y - thr)) / sharpness
///   SR:  y (threshold ignored)
struct Utility {
  UtilityKind kind = UtilityKind::EI;
  double sharpness = 1.0;  // sEI only

  double operator()(double y, double threshold) const;
};

double softplus(double x);

/// Improvement-threshold annealing: the quantile level rises linearly from
/// p_start at round 0 to p_end at round total_rounds.
struct ThresholdSchedule {
  double p_start = 0.5;
  double p_end = 0.99;
  int total_rounds = 10;
};

double anneal_percentile(int t, const ThresholdSchedule& sched);

/// Empirical quantile: the ceil(p*n)-th order statistic (no interpolation).
double empirical_quantile(std::vector<double> ys, double p);

/// tau_t: the annealed quantile of all observed y values.
double compute_threshold(const Dataset& dataset, int t, const ThresholdSchedule& sched);

}  // namespace genbo
