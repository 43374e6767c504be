#include "mlfc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlfc {
namespace {

// Sequential mean/variance accumulation; the fixed order keeps repeated
// runs bit-identical.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }

  double mean() const { return sum / static_cast<double>(n); }

  double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    double var = (sum_sq - static_cast<double>(n) * m * m) /
                 static_cast<double>(n - 1);
    var = std::max(var, 0.0);
    return std::sqrt(var / static_cast<double>(n));
  }
};

double draw_gain(const FadingModel& model, Rng& stream) {
  switch (model.family) {
    case FadingFamily::rayleigh_unit:
      return stream.next_exponential(1.0);
    case FadingFamily::exponential:
      return stream.next_exponential(model.param);
    case FadingFamily::constant:
      return model.param;
  }
  return 0.0;
}

}  // namespace

FadingModel FadingModel::rayleigh() { return {FadingFamily::rayleigh_unit, 1.0}; }

FadingModel FadingModel::exponential(double mean) {
  if (mean <= 0.0) throw DegenerateModel("exponential fading requires mean > 0");
  return {FadingFamily::exponential, mean};
}

FadingModel FadingModel::constant(double gain) {
  if (gain < 0.0) throw DegenerateModel("constant fading requires gain >= 0");
  return {FadingFamily::constant, gain};
}

double FadingModel::mean_gain() const {
  return param;  // exponential mean or the constant gain
}

double FadingModel::analytic_min_gain(int k) const {
  // The minimum of k i.i.d. exponentials with mean m is exponential with
  // mean m/k; a constant is its own minimum.
  switch (family) {
    case FadingFamily::rayleigh_unit:
      return 1.0 / static_cast<double>(k);
    case FadingFamily::exponential:
      return param / static_cast<double>(k);
    case FadingFamily::constant:
      return param;
  }
  return 0.0;
}

std::string FadingModel::label() const {
  std::ostringstream os;
  switch (family) {
    case FadingFamily::rayleigh_unit: os << "rayleigh"; break;
    case FadingFamily::exponential: os << "exp(" << param << ")"; break;
    case FadingFamily::constant: os << "const(" << param << ")"; break;
  }
  return os.str();
}

std::vector<double> sample_gains(const FadingModel& model, std::int64_t count,
                                 Rng& stream) {
  std::vector<double> gains;
  gains.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) gains.push_back(draw_gain(model, stream));
  return gains;
}

Estimate expected_min_gain(const FadingModel& model, int k, const McConfig& mc) {
  if (k < 1) throw DegenerateInput("expected_min_gain: k must be >= 1");
  const double analytic = model.analytic_min_gain(k);
  if (model.is_constant()) return {analytic, 0.0, analytic};

  Rng stream(mc.seed, "min_gain/" + model.label() + "/K=" + std::to_string(k));
  Accumulator acc;
  for (std::int64_t s = 0; s < mc.samples; ++s) {
    double m = draw_gain(model, stream);
    for (int i = 1; i < k; ++i) m = std::min(m, draw_gain(model, stream));
    acc.add(m);
  }
  return {acc.mean(), acc.std_error(), analytic};
}

Estimate expected_min_over_self_ratio(const FadingModel& model, int k,
                                      const McConfig& mc) {
  if (k < 1) throw DegenerateInput("expected_min_over_self_ratio: k must be >= 1");
  if (model.is_degenerate_zero())
    throw DegenerateModel("min/self ratio undefined for constant(0) gains");
  if (model.is_constant()) return {1.0, 0.0, std::nullopt};

  Rng stream(mc.seed, "min_self_ratio/" + model.label() + "/K=" + std::to_string(k));
  Accumulator acc;
  std::vector<double> gains(static_cast<std::size_t>(k));
  for (std::int64_t s = 0; s < mc.samples; ++s) {
    double m = 0.0;
    for (int i = 0; i < k; ++i) {
      gains[static_cast<std::size_t>(i)] = draw_gain(model, stream);
      m = (i == 0) ? gains[0] : std::min(m, gains[static_cast<std::size_t>(i)]);
    }
    // Per-draw average over the node whose own gain sits in the
    // denominator; every node has the same expectation by symmetry.
    double ratio_sum = 0.0;
    for (int i = 0; i < k; ++i) ratio_sum += m / gains[static_cast<std::size_t>(i)];
    acc.add(ratio_sum / static_cast<double>(k));
  }
  return {acc.mean(), acc.std_error(), std::nullopt};
}

}  // namespace mlfc
