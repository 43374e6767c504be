#include "mlfc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlfc {
namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau simplex with Bland's rule: maximize obj subject to
// A x = b, x >= 0, b >= 0. Returns false when infeasible.
struct Tableau {
  int rows;
  int cols;  // variables
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<int> basis;

  void pivot(int row, int col) {
    const double piv = a[row][col];
    for (int c = 0; c < cols; ++c) a[row][c] /= piv;
    b[row] /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      const double factor = a[r][col];
      if (factor == 0.0) continue;
      for (int c = 0; c < cols; ++c) a[r][c] -= factor * a[row][c];
      b[r] -= factor * b[row];
    }
    basis[row] = col;
  }

  // Optimizes max obj over the current basis; obj is dense over cols.
  void optimize(const std::vector<double>& obj) {
    for (int guard = 0; guard < 10000; ++guard) {
      // Reduced costs via the basic objective rows.
      std::vector<double> y(rows);
      for (int r = 0; r < rows; ++r) y[r] = obj[basis[r]];
      int entering = -1;
      for (int c = 0; c < cols && entering < 0; ++c) {
        double reduced = obj[c];
        for (int r = 0; r < rows; ++r) reduced -= y[r] * a[r][c];
        if (reduced > kPivotTol) entering = c;  // Bland: first improving
      }
      if (entering < 0) return;

      int leaving = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        if (a[r][entering] <= kPivotTol) continue;
        const double ratio = b[r] / a[r][entering];
        if (ratio < best - kPivotTol ||
            (ratio < best + kPivotTol &&
             (leaving < 0 || basis[r] < basis[leaving]))) {
          best = ratio;
          leaving = r;
        }
      }
      if (leaving < 0) return;  // unbounded; cannot happen for our LPs
      pivot(leaving, entering);
    }
  }
};

}  // namespace

LpResult lp_max_min_fixed_power(const std::vector<double>& rates) {
  const int n = static_cast<int>(rates.size());
  if (n == 0) return {};

  // Variables: p_1..p_n, t, s_1..s_n, then one artificial per row.
  const int vars = 2 * n + 1;
  const int rows = n + 1;
  Tableau tab;
  tab.rows = rows;
  tab.cols = vars + rows;
  tab.a.assign(rows, std::vector<double>(tab.cols, 0.0));
  tab.b.assign(rows, 0.0);
  tab.basis.resize(rows);

  for (int i = 0; i < n; ++i) {
    tab.a[i][i] = rates[static_cast<std::size_t>(i)];  // p_i
    tab.a[i][n] = -1.0;                                // t
    tab.a[i][n + 1 + i] = -1.0;                        // slack
    tab.b[i] = 0.0;
  }
  for (int i = 0; i < n; ++i) tab.a[rows - 1][i] = 1.0;
  tab.b[rows - 1] = 1.0;
  for (int r = 0; r < rows; ++r) {
    tab.a[r][vars + r] = 1.0;
    tab.basis[r] = vars + r;
  }

  // Phase 1: drive the artificials out.
  std::vector<double> phase1(tab.cols, 0.0);
  for (int r = 0; r < rows; ++r) phase1[vars + r] = -1.0;
  tab.optimize(phase1);
  double infeasibility = 0.0;
  for (int r = 0; r < rows; ++r)
    if (tab.basis[r] >= vars) infeasibility += tab.b[r];
  if (infeasibility > 1e-8) return {};

  // Phase 2: maximize t, artificials locked out.
  std::vector<double> phase2(tab.cols, 0.0);
  phase2[n] = 1.0;
  for (int r = 0; r < rows; ++r)
    for (int c = vars; c < tab.cols; ++c) tab.a[r][c] = 0.0;
  tab.optimize(phase2);

  LpResult result;
  result.feasible = true;
  result.p.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < rows; ++r) {
    if (tab.basis[r] < n)
      result.p[static_cast<std::size_t>(tab.basis[r])] = tab.b[r];
    else if (tab.basis[r] == n)
      result.t = tab.b[r];
  }
  return result;
}

GridSearchResult apc_grid_search(const std::vector<SubgroupParams>& params,
                                 double step) {
  const std::size_t n = params.size();
  if (n < 1 || n > 3)
    throw DegenerateInput("grid search supports 1 to 3 subgroups");

  // Objective spelled out locally so the oracle does not share the
  // solver's helpers.
  auto term = [](const SubgroupParams& sp, double p) {
    if (p <= 0.0) return 0.0;
    const double arg = 1.0 / static_cast<double>(sp.size) + sp.apc_gain / p;
    return arg > 1.0 ? p * 0.5 * std::log2(arg) : 0.0;
  };
  auto objective = [&](const std::vector<double>& p) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      worst = std::min(worst, term(params[i], p[i]));
    return worst;
  };

  GridSearchResult best;
  best.t = -1.0;
  const int steps = static_cast<int>(std::llround(1.0 / step));

  if (n == 1) {
    best.t = objective({1.0});
    best.p = {1.0};
    return best;
  }

  std::vector<double> p(n, 0.0);
  for (int i = 0; i <= steps; ++i) {
    p[0] = static_cast<double>(i) * step;
    if (n == 2) {
      p[1] = 1.0 - p[0];
      const double value = objective(p);
      if (value > best.t) {
        best.t = value;
        best.p = p;
      }
      continue;
    }
    for (int j = 0; i + j <= steps; ++j) {
      p[1] = static_cast<double>(j) * step;
      p[2] = 1.0 - p[0] - p[1];
      const double value = objective(p);
      if (value > best.t) {
        best.t = value;
        best.p = p;
      }
    }
  }
  return best;
}

std::vector<RatioPin> pin_ratio_statistic(const FadingModel& model,
                                          const std::vector<int>& ks,
                                          std::int64_t samples,
                                          std::uint64_t seed) {
  std::vector<RatioPin> pins;
  pins.reserve(ks.size());
  for (int k : ks)
    pins.push_back({k, expected_min_over_self_ratio(model, k, {samples, seed})});
  return pins;
}

}  // namespace mlfc
