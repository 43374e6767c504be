#include <doctest.h>

#include <cmath>

#include "mlfc/channel.hpp"

using namespace mlfc;

TEST_CASE("constant gains sample as themselves") {
  Rng stream(1, "test");
  const auto gains = sample_gains(FadingModel::constant(2.0), 3, stream);
  CHECK(gains == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("unit-mean exponential sample mean is close to 1") {
  Rng stream(42, "lln-rayleigh");
  const auto gains = sample_gains(FadingModel::rayleigh(), 1000000, stream);
  double sum = 0.0;
  for (double g : gains) sum += g;
  CHECK(std::abs(sum / 1e6 - 1.0) < 5e-3);
}

TEST_CASE("exponential(0.5) sample mean is close to 0.5") {
  Rng stream(42, "lln-exp");
  const auto gains = sample_gains(FadingModel::exponential(0.5), 1000000, stream);
  double sum = 0.0;
  for (double g : gains) sum += g;
  CHECK(std::abs(sum / 1e6 - 0.5) < 3e-3);
}

TEST_CASE("expected min gain analytic values") {
  const McConfig mc{200000, 7};
  SUBCASE("k = 1 is the plain mean") {
    const Estimate e = expected_min_gain(FadingModel::rayleigh(), 1, mc);
    REQUIRE(e.analytic.has_value());
    CHECK(*e.analytic == 1.0);
    CHECK(std::abs(e.value - 1.0) <= 3.0 * e.std_error);
  }
  SUBCASE("minimum of 4 unit exponentials has mean 1/4") {
    const Estimate e = expected_min_gain(FadingModel::rayleigh(), 4, mc);
    REQUIRE(e.analytic.has_value());
    CHECK(*e.analytic == 0.25);
    CHECK(std::abs(e.value - 0.25) <= 3.0 * e.std_error);
  }
  SUBCASE("constant gains are exact") {
    const Estimate e = expected_min_gain(FadingModel::constant(1.7), 6, mc);
    CHECK(e.value == 1.7);
    CHECK(e.std_error == 0.0);
  }
}

TEST_CASE("min gain estimate is nonincreasing in k") {
  const McConfig mc{100000, 9};
  double prev = 1e300;
  double prev_se = 0.0;
  for (int k : {1, 2, 4, 8, 16}) {
    const Estimate e = expected_min_gain(FadingModel::rayleigh(), k, mc);
    CHECK(e.value <= prev + 3.0 * std::sqrt(prev_se * prev_se + e.std_error * e.std_error));
    prev = e.value;
    prev_se = e.std_error;
  }
}

TEST_CASE("ratio statistic") {
  const McConfig mc{200000, 21};
  SUBCASE("k = 1 is exactly one") {
    const Estimate e = expected_min_over_self_ratio(FadingModel::rayleigh(), 1, mc);
    CHECK(e.value == 1.0);
    CHECK(e.std_error == 0.0);
  }
  SUBCASE("constant gains give exactly one") {
    const Estimate e = expected_min_over_self_ratio(FadingModel::constant(3.0), 4, mc);
    CHECK(e.value == 1.0);
  }
  SUBCASE("constant zero is rejected") {
    CHECK_THROWS_AS(expected_min_over_self_ratio(FadingModel::constant(0.0), 2, mc),
                    DegenerateModel);
  }
  SUBCASE("estimates live in (0,1]") {
    for (int k : {2, 3, 8}) {
      const Estimate e = expected_min_over_self_ratio(FadingModel::rayleigh(), k, mc);
      CHECK(e.value > 0.0);
      CHECK(e.value <= 1.0);
    }
  }
  SUBCASE("exponential ratio matches ln(k)/(k-1)") {
    // Independent closed form for i.i.d. exponentials; scale-free, so the
    // mean does not matter.
    for (int k : {2, 4, 8}) {
      const double expected = std::log(static_cast<double>(k)) / (k - 1);
      const Estimate unit = expected_min_over_self_ratio(FadingModel::rayleigh(), k, mc);
      CHECK(std::abs(unit.value - expected) <= 3.0 * unit.std_error);
      const Estimate scaled =
          expected_min_over_self_ratio(FadingModel::exponential(0.3), k, mc);
      CHECK(std::abs(scaled.value - expected) <= 3.0 * scaled.std_error);
    }
  }
}

TEST_CASE("estimators are bit-deterministic") {
  const McConfig mc{50000, 1234};
  const Estimate a = expected_min_gain(FadingModel::rayleigh(), 4, mc);
  const Estimate b = expected_min_gain(FadingModel::rayleigh(), 4, mc);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  const Estimate c = expected_min_over_self_ratio(FadingModel::rayleigh(), 4, mc);
  const Estimate d = expected_min_over_self_ratio(FadingModel::rayleigh(), 4, mc);
  CHECK(c.value == d.value);
  CHECK(c.std_error == d.std_error);
}

TEST_CASE("analytic and Monte Carlo agree for the exponential family") {
  const McConfig mc{300000, 99};
  for (double mean : {0.5, 1.0, 2.0}) {
    for (int k : {1, 3, 5}) {
      const Estimate e = expected_min_gain(FadingModel::exponential(mean), k, mc);
      REQUIRE(e.analytic.has_value());
      CHECK(std::abs(e.value - *e.analytic) <= 3.0 * e.std_error);
    }
  }
}
