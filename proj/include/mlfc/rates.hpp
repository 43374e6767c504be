#pragma once

#include <span>
#include <vector>

#include "mlfc/channel.hpp"
#include "mlfc/topology.hpp"

namespace mlfc {

// max(0.5*log2(x), 0): bits per channel use achievable with lattice
// coding; arguments at or below 1 clip to zero rate.
double clipped_rate(double x);

// log2(1+x): point-to-point rate used by the time-sharing baselines.
double shannon_rate(double x);

// Rate of one subgroup at one channel use given per-node gains and
// transmit powers: clipped_rate(1/K + min_i gains[i]*powers[i]).
double subgroup_rate_instant(std::span<const double> gains,
                             std::span<const double> powers);

enum class RateMode {
  exact_expectation,  // Monte Carlo average of the instantaneous rate
  jensen_bound,       // expectation moved inside the rate function
};

// Expected subgroup rate at fixed transmit power for every member.
Estimate subgroup_rate_expected(const FadingModel& model, int k, double power,
                                RateMode mode, const McConfig& mc);

// Average of instantaneous rates over an explicit number of channel uses
// drawn from the given stream.
Estimate subgroup_rate_empirical(const FadingModel& model, int k, double power,
                                 std::int64_t uses, Rng& stream);

// min_c betas[c] * subgroup_rates[c]; betas must lie on the simplex.
double group_rate(std::span<const double> subgroup_rates,
                  std::span<const double> betas);

// Time fractions across groups (alpha) and within each group (beta),
// shaped like the network's group lists. Virtual groups carry zero alpha.
struct Allocation {
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<std::vector<double>>> beta;

  static Allocation uniform(const HierarchicalNetwork& net);
};

// 1-based (layer, group, subgroup) address of a rate term.
struct SubgroupPath {
  int layer = 0;
  int group = 0;
  int subgroup = 0;

  bool operator==(const SubgroupPath&) const = default;
};

struct RateReport {
  double network_rate = 0.0;
  double std_error = 0.0;
  SubgroupPath bottleneck;
  std::vector<std::vector<double>> group_rates;                  // [j][k]
  std::vector<std::vector<std::vector<double>>> subgroup_rates;  // [j][k][c]
};

using SubgroupEstimates = std::vector<std::vector<std::vector<Estimate>>>;

// Nested minimum over layers, groups, and subgroups of the weighted
// expected rates. Virtual groups are skipped and consume no time.
RateReport network_rate(const HierarchicalNetwork& net, const Allocation& alloc,
                        const SubgroupEstimates& estimates);

// Expected per-subgroup rates for the whole network at fixed power.
SubgroupEstimates subgroup_rates_fixed_power(const HierarchicalNetwork& net,
                                             const FadingModel& model,
                                             double power, RateMode mode,
                                             const McConfig& mc);

// Per-subgroup empirical averages over each subgroup's share of `uses`
// channel uses under the given allocation (per-subgroup streams).
SubgroupEstimates subgroup_rates_empirical(const HierarchicalNetwork& net,
                                           const Allocation& alloc,
                                           const FadingModel& model,
                                           double power, std::int64_t uses,
                                           const McConfig& mc);

enum class BaselineVariant {
  rf_comac_fpc,          // relay-free CoMAC, fixed power
  time_sharing,          // orthogonal collection of individual data
  rf_comac_apc,          // relay-free CoMAC, adaptive power
  improved_time_sharing  // time sharing with the adaptive-power budget
};

Estimate baseline_rate(BaselineVariant variant, int k1, double power,
                       const FadingModel& model, const McConfig& mc);

}  // namespace mlfc
