#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlfc/errors.hpp"
#include "mlfc/rng.hpp"

namespace mlfc {

enum class FadingFamily { rayleigh_unit, exponential, constant };

// Distribution of the channel power gain |h|^2. The noise variance is
// normalized to 1, so transmit power and SNR coincide.
struct FadingModel {
  FadingFamily family = FadingFamily::rayleigh_unit;
  double param = 1.0;  // mean for exponential, the gain itself for constant

  static FadingModel rayleigh();  // |h|^2 ~ exponential with mean 1
  static FadingModel exponential(double mean);
  static FadingModel constant(double gain);

  bool is_constant() const { return family == FadingFamily::constant; }
  bool is_degenerate_zero() const { return is_constant() && param <= 0.0; }

  double mean_gain() const;  // E[|h|^2]

  // E[min of k i.i.d. gains]; closed form for every supported family.
  double analytic_min_gain(int k) const;

  // Stable tag used to derive estimator streams.
  std::string label() const;
};

struct McConfig {
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::optional<double> analytic;
};

// i.i.d. gain draws from the given stream.
std::vector<double> sample_gains(const FadingModel& model, std::int64_t count,
                                 Rng& stream);

// Monte Carlo estimate of E[min of k i.i.d. gains]; the closed form is
// attached as `analytic`. Constant models return the exact value with no
// sampling.
Estimate expected_min_gain(const FadingModel& model, int k, const McConfig& mc);

// Estimate of E[min_{i in [1:k]} X_i / X_j], the average over j of the
// minimum gain divided by each node's own gain. The value lies in (0,1]
// and equals 1 exactly for k = 1 and for constant models.
Estimate expected_min_over_self_ratio(const FadingModel& model, int k,
                                      const McConfig& mc);

}  // namespace mlfc
