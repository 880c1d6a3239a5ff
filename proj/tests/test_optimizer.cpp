#include <cmath>

#include "doctest.h"
#include "hoskip/evaluation.hpp"
#include "hoskip/optimizer.hpp"

using namespace hoskip;

TEST_CASE("curvature integral oracle values") {
  CHECK(rate_curvature_integral(3.0) == doctest::Approx(0.49766065647890523).epsilon(1e-8));
  CHECK(rate_curvature_integral(4.0) == doctest::Approx(0.8083921233665132).epsilon(1e-8));
  CHECK(rate_curvature_integral(5.0) == doctest::Approx(1.0941719445122409).epsilon(1e-8));
  CHECK_THROWS_AS(rate_curvature_integral(2.0), ValidationError);
}

TEST_CASE("closed-form optimum") {
  CHECK(optimal_skipping_time_closed(4.0, 50.0) == doctest::Approx(8.03783429491972).epsilon(1e-8));
  CHECK(optimal_skipping_time_closed(4.0, 0.0) == 0.0);
  CHECK_THROWS_AS(optimal_skipping_time_closed(4.0, -1.0), ValidationError);
}

TEST_CASE("property: closed-form optimum is linear in cost and decreasing in beta") {
  for (double beta : {3.0, 4.0, 5.0}) {
    const double base = optimal_skipping_time_closed(beta, 10.0);
    for (double c : {30.0, 50.0, 70.0}) {
      const double s = optimal_skipping_time_closed(beta, c);
      CHECK(std::abs(s - base * c / 10.0) <= 4.0 * std::numeric_limits<double>::epsilon() * s);
    }
  }
  double prev = INFINITY;
  for (double beta : {2.5, 3.0, 3.5, 4.0, 5.0, 6.0}) {
    const double s = optimal_skipping_time_closed(beta, 50.0);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("numeric optimum oracle value") {
  const OptResult r = optimal_skipping_time_numeric(0.005, {5.0, 4.0, 0.0}, 50.0);
  REQUIRE(r.s_star.has_value());
  CHECK(r.is_interior);
  CHECK(*r.s_star == doctest::Approx(8.59904879109638).epsilon(1e-3));
}

TEST_CASE("property: the numeric optimum is a local maximum") {
  const NetworkParams net{3.0, 3.0, 0.0};
  for (double v : {0.002, 0.004, 0.006}) {
    const OptResult r = optimal_skipping_time_numeric(v, net, 30.0);
    REQUIRE(r.s_star.has_value());
    REQUIRE(r.q_at_star.has_value());
    const double s = *r.s_star;
    CHECK(*r.q_at_star == doctest::Approx(q_tilde(s, v, net, 30.0)));
    CHECK(*r.q_at_star >= q_tilde(s * 0.9, v, net, 30.0));
    CHECK(*r.q_at_star >= q_tilde(s * 1.1, v, net, 30.0));
  }
}

TEST_CASE("without cost the best skipping time sits on the lower bound") {
  const OptResult r = optimal_skipping_time_numeric(0.005, {5.0, 4.0, 0.0}, 0.0);
  CHECK_FALSE(r.s_star.has_value());
  CHECK(r.boundary_best);
}

TEST_CASE("search configuration validation") {
  SearchConfig s;
  s.s_min = 0.0;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = {};
  s.s_max = 0.5;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = {};
  s.grid_points = 2;
  CHECK_THROWS_AS(validate(s), ValidationError);
  CHECK_THROWS_AS(optimal_skipping_time_numeric(0.0, {5.0, 4.0, 0.0}, 50.0), ValidationError);
  CHECK_THROWS_AS(optimal_skipping_time_numeric(0.005, {5.0, 4.0, 1.0}, 50.0), ValidationError);
}
