#pragma once

#include <vector>

#include "mlfc/allocation.hpp"
#include "mlfc/channel.hpp"

namespace mlfc {

// Brute-force reference routes for the allocation solvers. These live on
// purpose on a separate code path from the closed forms they check.

// Solves max t s.t. p_i * rate_i >= t, sum p = 1, p >= 0 with a dense
// two-phase simplex method.
struct LpResult {
  bool feasible = false;
  double t = 0.0;
  std::vector<double> p;
};
LpResult lp_max_min_fixed_power(const std::vector<double>& rates);

// Exhaustive search of the APC max-min objective over the probability
// simplex with the given step (2 or 3 subgroups).
struct GridSearchResult {
  double t = 0.0;
  std::vector<double> p;
};
GridSearchResult apc_grid_search(const std::vector<SubgroupParams>& params,
                                 double step);

// The pinning run for the min-over-self ratio statistic.
struct RatioPin {
  int k = 0;
  Estimate estimate;
};
std::vector<RatioPin> pin_ratio_statistic(const FadingModel& model,
                                          const std::vector<int>& ks,
                                          std::int64_t samples,
                                          std::uint64_t seed);

}  // namespace mlfc
