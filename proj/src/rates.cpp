#include "mlfc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace mlfc {
namespace {

constexpr double kSimplexTol = 1e-9;

std::string real_tag(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void check_simplex(std::span<const double> fractions, const char* what) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < -kSimplexTol || f > 1.0 + kSimplexTol)
      throw SimplexViolation(std::string(what) + " fraction outside [0,1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw SimplexViolation(std::string(what) + " fractions sum to " +
                           std::to_string(sum));
}

}  // namespace

double clipped_rate(double x) {
  if (x <= 1.0) return 0.0;
  return 0.5 * std::log2(x);
}

double shannon_rate(double x) { return std::log2(1.0 + x); }

double subgroup_rate_instant(std::span<const double> gains,
                             std::span<const double> powers) {
  if (gains.empty()) throw EmptySubgroup("subgroup has no members");
  if (gains.size() != powers.size())
    throw ShapeMismatch("gains and powers differ in length");
  double weakest = gains[0] * powers[0];
  for (std::size_t i = 1; i < gains.size(); ++i)
    weakest = std::min(weakest, gains[i] * powers[i]);
  return clipped_rate(1.0 / static_cast<double>(gains.size()) + weakest);
}

Estimate subgroup_rate_expected(const FadingModel& model, int k, double power,
                                RateMode mode, const McConfig& mc) {
  if (k < 1) throw EmptySubgroup("subgroup has no members");
  const double inv_k = 1.0 / static_cast<double>(k);

  if (mode == RateMode::jensen_bound) {
    const double value =
        clipped_rate(inv_k + model.analytic_min_gain(k) * power);
    return {value, 0.0, value};
  }

  if (model.is_constant()) {
    const double value = clipped_rate(inv_k + model.param * power);
    return {value, 0.0, value};
  }

  Rng stream(mc.seed, "subgroup_exact/" + model.label() + "/K=" +
                          std::to_string(k) + "/P=" + real_tag(power));
  return subgroup_rate_empirical(model, k, power, mc.samples, stream);
}

Estimate subgroup_rate_empirical(const FadingModel& model, int k, double power,
                                 std::int64_t uses, Rng& stream) {
  if (k < 1) throw EmptySubgroup("subgroup has no members");
  const double inv_k = 1.0 / static_cast<double>(k);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < uses; ++s) {
    const std::vector<double> gains = sample_gains(model, k, stream);
    double weakest = gains[0];
    for (int i = 1; i < k; ++i)
      weakest = std::min(weakest, gains[static_cast<std::size_t>(i)]);
    const double r = clipped_rate(inv_k + weakest * power);
    sum += r;
    sum_sq += r * r;
  }
  const double n = static_cast<double>(uses);
  const double mean = sum / n;
  double se = 0.0;
  if (uses > 1) {
    const double var = std::max((sum_sq - n * mean * mean) / (n - 1.0), 0.0);
    se = std::sqrt(var / n);
  }
  return {mean, se, std::nullopt};
}

double group_rate(std::span<const double> subgroup_rates,
                  std::span<const double> betas) {
  if (subgroup_rates.empty()) throw EmptySubgroup("group has no subgroups");
  if (subgroup_rates.size() != betas.size())
    throw ShapeMismatch("rates and betas differ in length");
  check_simplex(betas, "beta");
  double worst = betas[0] * subgroup_rates[0];
  for (std::size_t c = 1; c < betas.size(); ++c)
    worst = std::min(worst, betas[c] * subgroup_rates[c]);
  return worst;
}

Allocation Allocation::uniform(const HierarchicalNetwork& net) {
  Allocation alloc;
  const int real_groups = net.real_group_count();
  alloc.alpha.resize(net.groups.size());
  alloc.beta.resize(net.groups.size());
  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    alloc.alpha[j].resize(net.groups[j].size(), 0.0);
    alloc.beta[j].resize(net.groups[j].size());
    for (std::size_t k = 0; k < net.groups[j].size(); ++k) {
      const std::size_t subgroups = net.groups[j][k].subgroups.size();
      alloc.beta[j][k].assign(subgroups, 1.0 / static_cast<double>(subgroups));
      if (!net.is_virtual(net.layers[j + 1][k]))
        alloc.alpha[j][k] = 1.0 / static_cast<double>(real_groups);
    }
  }
  return alloc;
}

RateReport network_rate(const HierarchicalNetwork& net, const Allocation& alloc,
                        const SubgroupEstimates& estimates) {
  if (alloc.alpha.size() != net.groups.size() ||
      alloc.beta.size() != net.groups.size() ||
      estimates.size() != net.groups.size())
    throw ShapeMismatch("allocation does not match the network");

  // Alpha spans all real groups of the whole network.
  std::vector<double> real_alpha;
  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    if (alloc.alpha[j].size() != net.groups[j].size() ||
        alloc.beta[j].size() != net.groups[j].size() ||
        estimates[j].size() != net.groups[j].size())
      throw ShapeMismatch("allocation does not match layer " +
                          std::to_string(j + 2));
    for (std::size_t k = 0; k < net.groups[j].size(); ++k) {
      if (net.is_virtual(net.layers[j + 1][k])) {
        if (alloc.alpha[j][k] != 0.0)
          throw SimplexViolation("virtual group carries nonzero alpha");
        continue;
      }
      real_alpha.push_back(alloc.alpha[j][k]);
    }
  }
  check_simplex(real_alpha, "alpha");

  RateReport report;
  report.network_rate = std::numeric_limits<double>::infinity();
  report.group_rates.resize(net.groups.size());
  report.subgroup_rates.resize(net.groups.size());

  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    report.group_rates[j].assign(net.groups[j].size(), 0.0);
    report.subgroup_rates[j].resize(net.groups[j].size());
    for (std::size_t k = 0; k < net.groups[j].size(); ++k) {
      const GroupSpec& group = net.groups[j][k];
      const auto& beta = alloc.beta[j][k];
      const auto& ests = estimates[j][k];
      if (beta.size() != group.subgroups.size() ||
          ests.size() != group.subgroups.size())
        throw ShapeMismatch("subgroup count mismatch at layer " +
                            std::to_string(j + 2));
      for (const Estimate& e : ests)
        report.subgroup_rates[j][k].push_back(e.value);

      if (net.is_virtual(net.layers[j + 1][k])) continue;
      check_simplex(beta, "beta");

      double worst = 0.0;
      std::size_t worst_c = 0;
      for (std::size_t c = 0; c < beta.size(); ++c) {
        const double term = beta[c] * ests[c].value;
        if (c == 0 || term < worst) {
          worst = term;
          worst_c = c;
        }
      }
      report.group_rates[j][k] = worst;

      const double weighted = alloc.alpha[j][k] * worst;
      if (weighted < report.network_rate) {
        report.network_rate = weighted;
        report.bottleneck = {static_cast<int>(j) + 2, static_cast<int>(k) + 1,
                             static_cast<int>(worst_c) + 1};
        report.std_error = alloc.alpha[j][k] * beta[worst_c] *
                           ests[worst_c].std_error;
      }
    }
  }
  if (!std::isfinite(report.network_rate))
    throw ShapeMismatch("network has no real groups");
  return report;
}

SubgroupEstimates subgroup_rates_fixed_power(const HierarchicalNetwork& net,
                                             const FadingModel& model,
                                             double power, RateMode mode,
                                             const McConfig& mc) {
  SubgroupEstimates out(net.groups.size());
  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    out[j].resize(net.groups[j].size());
    for (std::size_t k = 0; k < net.groups[j].size(); ++k)
      for (const auto& subgroup : net.groups[j][k].subgroups)
        out[j][k].push_back(subgroup_rate_expected(
            model, static_cast<int>(subgroup.size()), power, mode, mc));
  }
  return out;
}

SubgroupEstimates subgroup_rates_empirical(const HierarchicalNetwork& net,
                                           const Allocation& alloc,
                                           const FadingModel& model,
                                           double power, std::int64_t uses,
                                           const McConfig& mc) {
  SubgroupEstimates out(net.groups.size());
  for (std::size_t j = 0; j < net.groups.size(); ++j) {
    out[j].resize(net.groups[j].size());
    for (std::size_t k = 0; k < net.groups[j].size(); ++k) {
      const GroupSpec& group = net.groups[j][k];
      for (std::size_t c = 0; c < group.subgroups.size(); ++c) {
        const double share = alloc.alpha[j][k] * alloc.beta[j][k][c];
        const std::int64_t n =
            std::max<std::int64_t>(1, std::llround(share * static_cast<double>(uses)));
        Rng stream(mc.seed, "empirical/l=" + std::to_string(j + 2) + "/k=" +
                                std::to_string(k + 1) + "/c=" + std::to_string(c + 1));
        out[j][k].push_back(subgroup_rate_empirical(
            model, static_cast<int>(group.subgroups[c].size()), power, n, stream));
      }
    }
  }
  return out;
}

Estimate baseline_rate(BaselineVariant variant, int k1, double power,
                       const FadingModel& model, const McConfig& mc) {
  if (k1 < 1) throw EmptySubgroup("baseline needs at least one source");
  const double inv_k = 1.0 / static_cast<double>(k1);

  switch (variant) {
    case BaselineVariant::rf_comac_fpc: {
      const double value =
          clipped_rate(inv_k + model.analytic_min_gain(k1) * power);
      return {value, 0.0, value};
    }
    case BaselineVariant::time_sharing: {
      const double value = inv_k * shannon_rate(model.mean_gain() * power);
      return {value, 0.0, value};
    }
    case BaselineVariant::rf_comac_apc: {
      const Estimate ratio = expected_min_over_self_ratio(model, k1, mc);
      const double min_gain = model.analytic_min_gain(k1);
      const double eps = min_gain * power / ratio.value;
      const double arg = inv_k + eps;
      const double value = clipped_rate(arg);
      double se = 0.0;
      if (arg > 1.0 && ratio.std_error > 0.0)
        se = eps / (2.0 * std::log(2.0) * arg * ratio.value) * ratio.std_error;
      return {value, se, std::nullopt};
    }
    case BaselineVariant::improved_time_sharing: {
      if (model.is_constant()) {
        const double value =
            inv_k * shannon_rate(model.param * static_cast<double>(k1) * power);
        return {value, 0.0, value};
      }
      Rng stream(mc.seed, "improved_ts/" + model.label() + "/K=" + std::to_string(k1));
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::int64_t s = 0; s < mc.samples; ++s) {
        const double g = sample_gains(model, 1, stream)[0];
        const double r = shannon_rate(g * static_cast<double>(k1) * power);
        sum += r;
        sum_sq += r * r;
      }
      const double n = static_cast<double>(mc.samples);
      const double mean = sum / n;
      double se = 0.0;
      if (mc.samples > 1) {
        const double var = std::max((sum_sq - n * mean * mean) / (n - 1.0), 0.0);
        se = std::sqrt(var / n);
      }
      return {inv_k * mean, inv_k * se, std::nullopt};
    }
  }
  throw Error("unknown baseline variant");
}

}  // namespace mlfc
