#include <cmath>

#include "doctest.h"
#include "hoskip/model.hpp"
#include "hoskip/montecarlo.hpp"

using namespace hoskip;

TEST_CASE("parameter validation names the field") {
  auto field_of = [](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string{};
  };
  CHECK(field_of([] { validate(NetworkParams{0.0, 4.0, 0.0}); }) == "lambda");
  CHECK(field_of([] { validate(NetworkParams{1.0, 2.0, 0.0}); }) == "beta");
  CHECK(field_of([] { validate(NetworkParams{1.0, 4.0, -1.0}); }) == "sigma2");
  CHECK(field_of([] { validate(SkippingPolicy{0.0, 0.0, 0.0}); }) == "s");
  CHECK(field_of([] { validate(SkippingPolicy{1.0, -1.0, 0.0}); }) == "cost");
  CHECK(field_of([] { validate(SkippingPolicy{1.0, 0.0, -1.0}); }) == "epsilon");
  CHECK_THROWS_AS(validate(SpeedLaw::exponential(0.0)), ValidationError);
  CHECK_THROWS_AS(validate(SpeedLaw::deterministic(-1.0)), ValidationError);
  CHECK_THROWS_AS(validate(SpeedLaw::erlang(0, 1.0)), ValidationError);
  CHECK_NOTHROW(validate(NetworkParams{}));
  CHECK_NOTHROW(validate(SpeedLaw::hyper_exponential_with_mean(0.4)));
}

TEST_CASE("movement period offsets") {
  const MovementPeriod m{0.5, 10.0};
  CHECK(m.speed() == doctest::Approx(0.05));
  CHECK(m.offset(0) == 0.0);
  CHECK(m.offset(4) == doctest::Approx(0.2));
}

TEST_CASE("displacement law means and survival") {
  for (const SpeedLaw& law : {SpeedLaw::deterministic(0.7), SpeedLaw::exponential(0.7), SpeedLaw::erlang(3, 0.7),
                              SpeedLaw::hyper_exponential_with_mean(0.7)})
    CHECK(mean_displacement(law) == doctest::Approx(0.7));
  CHECK(displacement_survival(SpeedLaw::exponential(2.0), 2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(displacement_density(SpeedLaw::exponential(2.0), 0.0) == doctest::Approx(0.5));
  CHECK_THROWS(displacement_density(SpeedLaw::deterministic(1.0), 1.0));
  const double q = displacement_upper_quantile(SpeedLaw::exponential(1.0), 1e-6);
  CHECK(q == doctest::Approx(-std::log(1e-6)).epsilon(1e-6));
  CHECK(displacement_survival(SpeedLaw::erlang(2, 1.0), 1.0) == doctest::Approx(3.0 * std::exp(-2.0)));
}

TEST_CASE("property: sampling reproduces the mean") {
  for (const SpeedLaw& law : {SpeedLaw::exponential(0.5), SpeedLaw::erlang(4, 0.5),
                              SpeedLaw::hyper_exponential_with_mean(0.5)}) {
    ReplicationRng rng(11, 0);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double x = sample_displacement(law, [&] { return rng.uniform(); });
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 0.5) < 4.0 * se);
  }
}
