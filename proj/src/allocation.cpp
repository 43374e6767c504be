#include "mlfc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mlfc {
namespace {

constexpr double kLn2 = 0.6931471805599453;
const double kInvE = std::exp(-1.0);

std::string subgroup_tag(const SubgroupParams& sp) {
  std::ostringstream os;
  os << "(l=" << sp.path.layer << ",k=" << sp.path.group
     << ",c=" << sp.path.subgroup << ")";
  return os.str();
}

// Stationarity value s(p) = ln(A) - (eps/p)/A with A = 1/K + eps/p.
// Positive left of the objective's peak, zero at it, negative beyond;
// 2 ln 2 * d/dp apc_objective = s wherever the rate is positive.
double stationarity(double eps, int k, double p) {
  const double u = eps / p;
  const double a = 1.0 / static_cast<double>(k) + u;
  return std::log(a) - u / a;
}

// Largest p with positive rate: 1/K + eps/p > 1. Unbounded for K = 1.
double zero_rate_p(double eps, int k) {
  if (k <= 1) return std::numeric_limits<double>::infinity();
  return eps * static_cast<double>(k) / static_cast<double>(k - 1);
}

// Falling-branch root of apc_objective(p) == t, in [peak, zero_rate_p].
double solve_tight_p_right(double eps, int k, double t, const ApcPeak& peak) {
  if (k == 1) return std::numeric_limits<double>::infinity();
  if (t <= 0.0) return zero_rate_p(eps, k);
  double lo = peak.p;               // objective >= t here
  double hi = zero_rate_p(eps, k);  // objective == 0 here
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (apc_objective(eps, k, mid) >= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double sum_left_roots(const std::vector<SubgroupParams>& params, double t) {
  double sum = 0.0;
  for (const auto& sp : params) sum += solve_tight_p(sp.apc_gain, sp.size, t);
  return sum;
}

double sum_right_roots_capped(const std::vector<SubgroupParams>& params,
                              const std::vector<ApcPeak>& peaks, double t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i)
    sum += std::min(solve_tight_p_right(params[i].apc_gain, params[i].size, t,
                                        peaks[i]),
                    1.0);
  return sum;
}

void finish_solution(AllocationSolution& sol,
                     const std::vector<SubgroupParams>& params, bool apc) {
  sol.alpha.clear();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto key = std::make_pair(params[i].path.layer, params[i].path.group);
    sol.alpha[key] += sol.p[i];
  }
  sol.beta.assign(params.size(), 0.0);
  sol.constraint_slack.assign(params.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto key = std::make_pair(params[i].path.layer, params[i].path.group);
    const double a = sol.alpha.at(key);
    sol.beta[i] = a > 0.0 ? sol.p[i] / a : 0.0;
    const double value =
        apc ? apc_objective(params[i].apc_gain, params[i].size, sol.p[i])
            : sol.p[i] * params[i].fixed_rate;
    sol.constraint_slack[i] = value - sol.t;
  }
}

}  // namespace

AllocationSolution solve_fixed_power(const std::vector<SubgroupParams>& params) {
  if (params.empty()) throw DegenerateInput("no subgroups to allocate");

  AllocationSolution sol;
  for (const auto& sp : params) {
    if (sp.fixed_rate < 0.0)
      throw DegenerateInput("negative rate at " + subgroup_tag(sp));
    if (sp.fixed_rate == 0.0) {
      sol.zero_rate = true;
      if (sol.diagnostic.empty())
        sol.diagnostic = "zero-rate subgroup " + subgroup_tag(sp) +
                         " pins the objective to 0";
    }
  }
  if (sol.zero_rate) {
    sol.t = 0.0;
    sol.p.assign(params.size(), 1.0 / static_cast<double>(params.size()));
    finish_solution(sol, params, /*apc=*/false);
    return sol;
  }

  if (params.size() == 1) {
    sol.t = params.front().fixed_rate;
    sol.p = {1.0};
    finish_solution(sol, params, /*apc=*/false);
    return sol;
  }

  double inv_sum = 0.0;
  for (const auto& sp : params) inv_sum += 1.0 / sp.fixed_rate;
  sol.t = 1.0 / inv_sum;
  sol.p.reserve(params.size());
  for (const auto& sp : params) sol.p.push_back(sol.t / sp.fixed_rate);
  finish_solution(sol, params, /*apc=*/false);
  return sol;
}

double lambert_w0(double x) {
  if (x < -kInvE) {
    if (x > -kInvE * (1.0 + 1e-14)) return -1.0;  // rounding at the branch point
    throw DomainError("lambert_w0 requires x >= -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    // Series around the branch point in p = sqrt(2(1 + e x)).
    const double p = std::sqrt(2.0 * (1.0 + x / kInvE));
    w = -1.0 +
        p * (1.0 +
             p * (-1.0 / 3.0 +
                  p * (11.0 / 72.0 +
                       p * (-43.0 / 540.0 +
                            p * (769.0 / 17280.0 - p * 221.0 / 8505.0)))));
    if (p < 1e-3) return w;  // series already below the target residual
  } else if (x < 1.0) {
    w = x * (1.0 + x * (-1.0 + x * (1.5 - x * 8.0 / 3.0)));
    if (x > 0.25) w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = (x < 3.0) ? std::log1p(x) * 0.8 : l1 - l2 + l2 / l1;
  }

  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(x))) break;
    const double wp1 = w + 1.0;
    // Halley step; the denominator stays safe away from w = -1.
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (w < -1.0) w = -1.0 + 1e-16;
  }
  return w;
}

double apc_objective(double apc_gain, int size, double p) {
  if (p <= 0.0) return 0.0;
  return p * clipped_rate(1.0 / static_cast<double>(size) + apc_gain / p);
}

ApcPeak apc_peak(double apc_gain, int size) {
  if (apc_gain <= 0.0) throw DegenerateInput("apc_peak requires apc_gain > 0");
  if (size == 1)
    return {std::numeric_limits<double>::infinity(), apc_gain / (2.0 * kLn2)};

  // The peak sits where psi(A) = ln A - 1 + 1/(K A) crosses zero on (1, e).
  const double inv_k = 1.0 / static_cast<double>(size);
  double lo = 1.0;
  double hi = std::exp(1.0);
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double psi = std::log(mid) - 1.0 + inv_k / mid;
    if (psi < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double a = 0.5 * (lo + hi);
  const double p = apc_gain / (a - inv_k);
  return {p, apc_objective(apc_gain, size, p)};
}

double solve_tight_p(double apc_gain, int size, double t) {
  if (apc_gain <= 0.0) throw DegenerateInput("solve_tight_p requires apc_gain > 0");
  if (t < 0.0) throw DegenerateInput("solve_tight_p requires t >= 0");
  if (t == 0.0) return 0.0;

  const ApcPeak peak = apc_peak(apc_gain, size);
  double hi;
  if (size == 1) {
    if (t >= peak.value)
      throw NoSolution("target " + std::to_string(t) +
                       " is above the saturation value " +
                       std::to_string(peak.value));
    hi = std::max(apc_gain, t);
    while (apc_objective(apc_gain, size, hi) < t) {
      hi *= 2.0;
      if (!std::isfinite(hi)) throw NoSolution("bracket expansion overflow");
    }
  } else {
    if (t > peak.value * (1.0 + 1e-12))
      throw NoSolution("target " + std::to_string(t) + " is above the peak " +
                       std::to_string(peak.value) + " attained at p = " +
                       std::to_string(peak.p));
    if (t >= peak.value) return peak.p;
    hi = peak.p;
  }

  double lo = 0.0;  // objective 0 < t at the lower end
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (apc_objective(apc_gain, size, mid) >= t)
      hi = mid;
    else
      lo = mid;
    if ((hi - lo) <= 1e-17 * std::max(1.0, hi)) break;
  }

  // Newton polish on the rising branch, kept inside the bracket.
  double p = hi;
  for (int iter = 0; iter < 8; ++iter) {
    const double f = apc_objective(apc_gain, size, p) - t;
    if (std::abs(f) <= 1e-13 * std::max(1.0, t)) break;
    const double deriv = stationarity(apc_gain, size, p) / (2.0 * kLn2);
    if (deriv <= 0.0) break;
    const double next = p - f / deriv;
    if (next <= lo || next > hi) break;
    p = next;
  }
  return p;
}

AllocationSolution solve_apc(const std::vector<SubgroupParams>& params) {
  if (params.empty()) throw DegenerateInput("no subgroups to allocate");
  for (const auto& sp : params) {
    if (sp.apc_gain <= 0.0)
      throw DegenerateInput("nonpositive apc_gain at " + subgroup_tag(sp));
    if (sp.size < 1) throw DegenerateInput("empty subgroup " + subgroup_tag(sp));
  }
  const std::size_t n = params.size();

  AllocationSolution sol;
  sol.p.assign(n, 0.0);

  if (n == 1) {
    sol.p = {1.0};
    sol.t = apc_objective(params.front().apc_gain, params.front().size, 1.0);
    if (sol.t == 0.0) {
      sol.zero_rate = true;
      sol.diagnostic = "subgroup " + subgroup_tag(params.front()) +
                       " has zero rate at full time share";
    }
    finish_solution(sol, params, /*apc=*/true);
    return sol;
  }

  // If every split of the time budget drives some subgroup's rate to
  // zero, the objective is zero no matter the allocation. (With two or
  // more subgroups a support of one can only bind through a finite
  // zero-rate threshold, which is an open bound.)
  double support = 0.0;
  std::size_t narrowest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cap = std::min(zero_rate_p(params[i].apc_gain, params[i].size), 1.0);
    if (cap < std::min(zero_rate_p(params[narrowest].apc_gain,
                                   params[narrowest].size),
                       1.0))
      narrowest = i;
    support += cap;
  }
  if (support <= 1.0) {
    sol.zero_rate = true;
    sol.t = 0.0;
    sol.diagnostic = "subgroup " + subgroup_tag(params[narrowest]) +
                     " leaves no time split with positive rate everywhere";
    sol.p.assign(n, 1.0 / static_cast<double>(n));
    finish_solution(sol, params, /*apc=*/true);
    return sol;
  }

  std::vector<ApcPeak> peaks;
  peaks.reserve(n);
  double t_cap = std::numeric_limits<double>::infinity();
  for (const auto& sp : params) {
    ApcPeak peak = apc_peak(sp.apc_gain, sp.size);
    if (peak.p > 1.0) {
      // Shares never exceed 1, so the subgroup maxes out at p = 1.
      peak = {1.0, apc_objective(sp.apc_gain, sp.size, 1.0)};
    }
    t_cap = std::min(t_cap, peak.value);
    peaks.push_back(peak);
  }

  const double lo_at_cap = sum_left_roots(params, t_cap);
  const double hi_at_cap = sum_right_roots_capped(params, peaks, t_cap);

  // Parks leftover time on subgroups whose objective stays at or above t.
  auto distribute_slack = [&](double slack) {
    for (std::size_t i = 0; i < n && slack > 0.0; ++i) {
      const double room =
          std::min(solve_tight_p_right(params[i].apc_gain, params[i].size, sol.t,
                                       peaks[i]),
                   1.0) -
          sol.p[i];
      const double add = std::min(room, slack);
      if (add > 0.0) {
        sol.p[i] += add;
        slack -= add;
      }
    }
  };

  if (lo_at_cap > 1.0) {
    // Regular case: every constraint tight on its rising branch.
    double lo = 0.0;
    double hi = t_cap;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (sum_left_roots(params, mid) > 1.0)
        hi = mid;
      else
        lo = mid;
      if ((hi - lo) <= 1e-16 * std::max(1.0, hi)) break;
    }
    sol.t = lo;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.p[i] = solve_tight_p(params[i].apc_gain, params[i].size, sol.t);
      sum += sol.p[i];
    }
    distribute_slack(1.0 - sum);
  } else if (hi_at_cap < 1.0) {
    // Low-SNR case: the budget exceeds the useful time of every subgroup,
    // so the optimum rides the falling branches (or the share cap).
    double lo = 0.0;
    double hi = t_cap;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (sum_right_roots_capped(params, peaks, mid) < 1.0)
        hi = mid;
      else
        lo = mid;
      if ((hi - lo) <= 1e-16 * std::max(1.0, hi)) break;
    }
    sol.t = lo;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.p[i] = std::min(
          solve_tight_p_right(params[i].apc_gain, params[i].size, sol.t, peaks[i]),
          1.0);
      sum += sol.p[i];
    }
    // Trimming towards the peak never drops an objective below t.
    double excess = sum - 1.0;
    for (std::size_t i = 0; i < n && excess > 0.0; ++i) {
      const double room = sol.p[i] - std::min(peaks[i].p, sol.p[i]);
      const double cut = std::min(room, excess);
      sol.p[i] -= cut;
      excess -= cut;
    }
  } else {
    // Peak-limited case: some subgroup cannot exceed t_cap no matter how
    // much time it gets. Start every subgroup at its tight share and park
    // the leftover time where it does not hurt.
    sol.t = t_cap;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.p[i] = solve_tight_p(params[i].apc_gain, params[i].size, sol.t);
      sum += sol.p[i];
    }
    distribute_slack(1.0 - sum);
  }

  finish_solution(sol, params, /*apc=*/true);
  return sol;
}

KktReport kkt_check(const AllocationSolution& solution,
                    const std::vector<SubgroupParams>& params) {
  KktReport report;
  const std::size_t n = params.size();
  report.constraint_slack.assign(n, 0.0);
  report.w_residual.assign(n, 0.0);

  double p_sum = 0.0;
  double min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    p_sum += solution.p[i];
    const double value =
        apc_objective(params[i].apc_gain, params[i].size, solution.p[i]);
    report.constraint_slack[i] = value - solution.t;
    min_value = std::min(min_value, value);
  }
  report.simplex_residual = std::abs(p_sum - 1.0);
  report.feasibility_residual = std::max(0.0, solution.t - min_value);

  constexpr double kTightTol = 1e-6;
  bool has_slack = false;
  bool slack_justified = false;
  double min_slack = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n; ++i) {
    const double p = solution.p[i];
    if (p <= 0.0) continue;
    const double s = stationarity(params[i].apc_gain, params[i].size, p);

    if (report.constraint_slack[i] > kTightTol) {
      has_slack = true;
      min_slack = std::min(min_slack, report.constraint_slack[i]);
      continue;
    }

    // Tight constraint: recover the share from the stationarity value
    // via the Lambert-W closed form and compare.
    const double k = static_cast<double>(params[i].size);
    const double arg = -std::exp(-s) / (k * std::exp(1.0));
    if (arg < -kInvE) {
      // Tight beyond the representable branch: treat as an optimality
      // defect of the same size as the stationarity violation.
      report.w_residual[i] = std::abs(s);
      continue;
    }
    const double tau = lambert_w0(arg);
    const double denom = 1.0 + 1.0 / tau;
    if (denom == 0.0) continue;  // exactly at the peak of a size-1 subgroup
    const double recovered = -params[i].apc_gain * k / denom;
    report.w_residual[i] = std::abs(recovered - p) / std::max(1.0, p);

    if (std::abs(s) <= 1e-4 || p >= 1.0 - 1e-9) slack_justified = true;
  }

  if (has_slack && !slack_justified && !solution.zero_rate)
    report.optimality_residual = min_slack;

  report.max_residual =
      std::max({report.simplex_residual, report.feasibility_residual,
                report.optimality_residual});
  for (double w : report.w_residual)
    report.max_residual = std::max(report.max_residual, w);
  return report;
}

PowerPolicy apc_power_policy(const std::vector<std::vector<double>>& gains,
                             double p, double ratio_expectation, double budget) {
  if (gains.empty()) throw DegenerateInput("no channel uses supplied");
  if (p <= 0.0 || p > 1.0)
    throw DegenerateInput("time share must lie in (0,1]");
  if (ratio_expectation <= 0.0)
    throw DegenerateInput("ratio expectation must be positive");

  const std::size_t k = gains.front().size();
  if (k == 0) throw EmptySubgroup("subgroup has no members");

  PowerPolicy policy;
  policy.budget = budget;
  policy.scale = budget / (p * ratio_expectation);
  policy.node_powers.assign(k, std::vector<double>());
  for (auto& seq : policy.node_powers) seq.reserve(gains.size());

  for (const auto& use : gains) {
    if (use.size() != k) throw ShapeMismatch("inconsistent gain rows");
    double weakest = use[0];
    for (double g : use) {
      if (g <= 0.0) throw ZeroGain("zero gain on an active channel use");
      weakest = std::min(weakest, g);
    }
    for (std::size_t i = 0; i < k; ++i)
      policy.node_powers[i].push_back(policy.scale * weakest / use[i]);
  }
  return policy;
}

}  // namespace mlfc
