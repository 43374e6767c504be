#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mlfc/errors.hpp"
#include "mlfc/rates.hpp"

namespace mlfc {

// Per-subgroup inputs to the time-allocation problems. fixed_rate is the
// rate at constant transmit power; apc_gain (epsilon) is the effective
// SNR factor under the channel-inverting power policy, so the subgroup's
// contribution with time share p is p * clipped_rate(1/size + apc_gain/p).
struct SubgroupParams {
  SubgroupPath path;
  int size = 1;
  double fixed_rate = 0.0;
  double apc_gain = 0.0;
};

struct AllocationSolution {
  std::vector<double> p;  // time share per subgroup, aligned with the input
  double t = 0.0;         // achieved max-min objective
  std::map<std::pair<int, int>, double> alpha;  // (layer,group) -> sum of p
  std::vector<double> beta;                     // p / alpha of its group
  std::vector<double> constraint_slack;         // objective_i(p_i) - t
  bool zero_rate = false;
  std::string diagnostic;
};

// Max-min time allocation at fixed power: t* is the harmonic composition
// of the subgroup rates and p* = t*/rate equalizes every weighted term.
// A zero-rate subgroup pins the objective to zero; that case is reported
// through zero_rate/diagnostic instead of throwing.
AllocationSolution solve_fixed_power(const std::vector<SubgroupParams>& params);

// Principal branch of the Lambert W function, defined for x >= -1/e.
// Residual |W e^W - x| stays within 1e-12 * max(1, |x|).
double lambert_w0(double x);

// p * clipped_rate(1/size + apc_gain/p); the p -> 0 limit is 0.
double apc_objective(double apc_gain, int size, double p);

// Argmax and maximum of apc_objective over p > 0. For size == 1 the
// objective increases towards the supremum apc_gain / (2 ln 2) and the
// returned peak position is +infinity.
struct ApcPeak {
  double p = 0.0;
  double value = 0.0;
};
ApcPeak apc_peak(double apc_gain, int size);

// Smallest p >= 0 with apc_objective(p) == t (the rising-branch root),
// solved to residual 1e-12. Throws NoSolution when t exceeds the
// subgroup's attainable maximum.
double solve_tight_p(double apc_gain, int size, double t);

// Max-min time allocation under adaptive power control over the closed
// simplex (the shares sum to one). Regular instances equalize every
// constraint; when a subgroup's objective peaks inside the simplex the
// solution is capped by that peak and the spare time is parked on the
// remaining subgroups without dropping them below t.
AllocationSolution solve_apc(const std::vector<SubgroupParams>& params);

// Optimality audit of a candidate APC solution. Tight constraints are
// re-derived through the Lambert-W closed form for the stationary time
// share; slack constraints are only accepted when justified by a peaked
// or saturated subgroup. All residuals are reported, never thrown.
struct KktReport {
  double simplex_residual = 0.0;
  double feasibility_residual = 0.0;     // max(0, t - min objective)
  double optimality_residual = 0.0;      // unjustified slack, if any
  std::vector<double> constraint_slack;  // objective_i - t
  std::vector<double> w_residual;        // closed-form recovery error
  double max_residual = 0.0;
};
KktReport kkt_check(const AllocationSolution& solution,
                    const std::vector<SubgroupParams>& params);

// Channel-inverting transmit powers for one subgroup. gains[m][i] is node
// i's gain at active use m; each node sends scale * min_j gains[m][j] /
// gains[m][i] while active and stays silent otherwise, which meets the
// long-term budget P on average.
struct PowerPolicy {
  double scale = 0.0;  // the constant multiplying the inverted channel
  double budget = 0.0;
  std::vector<std::vector<double>> node_powers;  // [node][active use]
};
PowerPolicy apc_power_policy(const std::vector<std::vector<double>>& gains,
                             double p, double ratio_expectation, double budget);

}  // namespace mlfc
