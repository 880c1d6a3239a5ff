#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hoskip/datarate.hpp"

using namespace hoskip;
using std::numbers::pi;

TEST_CASE("k factor") {
  CHECK(k_factor(1.0, 4.0) == doctest::Approx(pi / 2.0));
  CHECK(k_factor(4.0, 4.0) == doctest::Approx(pi));
  CHECK(k_factor(0.0, 3.0) == 0.0);
  CHECK(k_factor(1.0, 3.0) == doctest::Approx((2.0 * pi / 3.0) / std::sin(2.0 * pi / 3.0)));
}

TEST_CASE("interference tail matches direct quadrature") {
  for (double beta : {3.0, 4.0, 5.5}) {
    CHECK(interference_tail(0.0, beta) == doctest::Approx((pi / beta) / std::sin(2.0 * pi / beta)).epsilon(1e-12));
    for (double y : {1e-3, 0.5, 1.0, 3.0, 50.0}) {
      const double direct = integrate_1d([beta](double t) { return t / (1.0 + std::pow(t, beta)); },
                                         Interval::semi_infinite(y, 1.0), {})
                                .value;
      CHECK(interference_tail(y, beta) == doctest::Approx(direct).epsilon(1e-9));
    }
    CHECK(interference_tail(INFINITY, beta) == 0.0);
  }
}

TEST_CASE("nearest-BS rate oracle values") {
  CHECK(tau1({1.0, 4.0, 0.0}) == doctest::Approx(1.4889876246658298).epsilon(1e-8));
  CHECK(tau1({3.0, 3.0, 0.0}) == doctest::Approx(0.8712597932206204).epsilon(1e-8));
  CHECK(tau1({1.0, 4.0, 1.0}) == doctest::Approx(1.4092346812948076).epsilon(1e-8));
}

TEST_CASE("property: interference-limited nearest-BS rate does not depend on density") {
  for (double beta : {3.0, 4.0}) {
    const double base = tau1({1.0, beta, 0.0});
    for (double lambda : {0.2, 5.0}) CHECK(tau1({lambda, beta, 0.0}) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("property: noise lowers the rate and denser networks recover it") {
  const double clean = tau1({1.0, 4.0, 0.0});
  double prev = clean;
  for (double s2 : {0.1, 1.0, 10.0}) {
    const double t = tau1({1.0, 4.0, s2});
    CHECK(t < prev);
    prev = t;
  }
  CHECK(tau1({1.0, 4.0, 1.0}) < tau1({5.0, 4.0, 1.0}));
  CHECK(tau1({5.0, 4.0, 1.0}) < clean);
}

TEST_CASE("stale-rate approximation oracle values") {
  CHECK(tau2_approx({0.3, {3.0, 3.0, 0.0}, {}}) == doctest::Approx(0.41106759879613486).epsilon(1e-8));
  CHECK(tau2_approx({0.0, {1.0, 4.0, 0.0}, {}}) == doctest::Approx(1.1627258206871993).epsilon(1e-8));
  CHECK_THROWS_AS(tau2_approx({0.1, {1.0, 4.0, 0.5}, {}}), ValidationError);
  CHECK_THROWS_AS(tau2_approx({-0.1, {1.0, 4.0, 0.0}, {}}), ValidationError);
}

TEST_CASE("property: stale-rate approximation depends on u sqrt(lambda) and decreases in u") {
  for (double beta : {3.0, 4.0}) {
    double prev = INFINITY;
    for (double x : {0.0, 0.1, 0.3, 0.6, 1.0}) {
      const double a = tau2_approx({x, {1.0, beta, 0.0}, {}});
      CHECK(a == doctest::Approx(tau2_approx({x / 2.0, {4.0, beta, 0.0}, {}})).epsilon(1e-9));
      CHECK(a < prev);
      prev = a;
    }
  }
}

TEST_CASE("property: refined rate interpolates between its components") {
  const NetworkParams net{3.0, 3.0, 0.0};
  const double t1 = tau1(net);
  CHECK(tau2_refined({0.0, net, {}}, 5.0) == doctest::Approx(t1));
  for (double u : {0.05, 0.2, 0.4}) {
    const double approx = tau2_approx({u, net, {}});
    const double r = tau2_refined({u, net, {}}, 5.0);
    CHECK(r >= std::min(t1, approx) - 1e-12);
    CHECK(r <= std::max(t1, approx) + 1e-12);
    CHECK(tau2_refined({u, net, {}}, 0.0) == doctest::Approx(t1));
    CHECK(tau2_refined({u, net, {}}, 1e6) == doctest::Approx(approx));
  }
  CHECK_THROWS_AS(tau2_refined({0.1, net, {}}, -1.0), ValidationError);
}

TEST_CASE("exact stale rate against the brute-force oracle") {
  const QuadratureSpec spec = sweep_accuracy();
  CHECK(tau2_exact({0.3, {3.0, 3.0, 0.0}, spec}) == doctest::Approx(0.4857177558605671).epsilon(1e-4));
  CHECK(tau2_exact({0.1, {1.0, 4.0, 0.0}, spec}) == doctest::Approx(1.4544691643922179).epsilon(1e-4));
}

TEST_CASE("property: exact stale rate at u = 0 equals the nearest-BS rate") {
  const NetworkParams net{1.0, 4.0, 0.0};
  CHECK(tau2_exact({0.0, net, sweep_accuracy()}) == doctest::Approx(tau1(net)).epsilon(1e-3));
}

TEST_CASE("property: exact stale rate falls with density at fixed offset") {
  const QuadratureSpec spec = sweep_accuracy();
  const double sparse = tau2_exact({0.2, {1.0, 4.0, 0.0}, spec});
  const double dense = tau2_exact({0.2, {5.0, 4.0, 0.0}, spec});
  CHECK(dense < sparse);
  CHECK(sparse < tau1({1.0, 4.0, 0.0}));
}

TEST_CASE("exact stale rate budget") {
  CHECK_THROWS_AS(tau2_exact({0.2, {1.0, 4.0, 0.0}, {}}, 1000), BudgetExceededError);
}

TEST_CASE("epsilon fit recovers a planted value") {
  const std::vector<double> u{0.0, 0.05, 0.1, 0.2, 0.3, 0.4};
  const double t1 = 1.5;
  std::vector<double> approx;
  std::vector<double> exact;
  for (double x : u) {
    approx.push_back(1.2 * std::exp(-2.0 * x));
    exact.push_back(refined_blend(x, 7.0, t1, approx.back()));
  }
  CHECK(fit_epsilon(u, t1, exact, approx) == doctest::Approx(7.0).epsilon(1e-6));
  for (auto& e : exact) e = t1;
  CHECK(fit_epsilon(u, t1, exact, approx) == doctest::Approx(0.0));
  for (std::size_t i = 0; i < u.size(); ++i) exact[i] = approx[i];
  CHECK(fit_epsilon(u, t1, exact, approx) == doctest::Approx(100.0));
  CHECK_THROWS_AS(fit_epsilon(u, t1, std::vector<double>{1.0}, approx), ValidationError);
}
