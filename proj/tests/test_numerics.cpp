#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hoskip/numerics.hpp"

using namespace hoskip;
using std::numbers::pi;

TEST_CASE("finite integrals of elementary functions") {
  const QuadratureSpec spec;
  const QuadResult r = integrate_1d([](double x) { return std::sin(x); }, Interval::finite(0.0, pi), spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  const QuadResult p = integrate_1d([](double x) { return x * x; }, Interval::finite(0.0, 3.0), spec);
  CHECK(p.value == doctest::Approx(9.0).epsilon(1e-13));
  const QuadResult rev = integrate_1d([](double x) { return x * x; }, Interval::finite(3.0, 0.0), spec);
  CHECK(rev.value == doctest::Approx(-9.0).epsilon(1e-13));
  const QuadResult empty = integrate_1d([](double) { return 1.0; }, Interval::finite(1.0, 1.0), spec);
  CHECK(empty.value == 0.0);
  CHECK(empty.converged);
}

TEST_CASE("semi-infinite integrals under both transforms") {
  for (auto t : {InfiniteTransform::rational, InfiniteTransform::exponential}) {
    QuadratureSpec spec;
    spec.infinite_transform = t;
    const QuadResult e = integrate_1d([](double x) { return std::exp(-x); }, Interval::semi_infinite(0.0), spec);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
    const QuadResult g = integrate_1d([](double x) { return std::exp(-x * x); }, Interval::semi_infinite(0.0), spec);
    CHECK(g.value == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-10));
  }
  const QuadResult c =
      integrate_1d([](double x) { return 1.0 / (1.0 + x * x); }, Interval::semi_infinite(1.0, 2.0), {});
  CHECK(c.converged);
  CHECK(c.value == doctest::Approx(pi / 4.0).epsilon(1e-9));
}

TEST_CASE("power-law tail under the exponential transform is flagged, not silently wrong") {
  QuadratureSpec spec;
  spec.infinite_transform = InfiniteTransform::exponential;
  const QuadResult c =
      integrate_1d([](double x) { return 1.0 / (1.0 + x * x); }, Interval::semi_infinite(1.0, 2.0), spec);
  if (c.converged) CHECK(c.value == doctest::Approx(pi / 4.0).epsilon(1e-7));
  else CHECK(std::abs(c.value - pi / 4.0) > c.error_estimate);
}

TEST_CASE("integrable endpoint singularity") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const QuadResult r =
      integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, Interval::finite(0.0, 1.0), spec);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("error estimate bounds the true error") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-6;
  const QuadResult r = integrate_1d([](double x) { return std::log(x); }, Interval::finite(0.0, 1.0), spec);
  CHECK(std::abs(r.value + 1.0) <= r.error_estimate + 1e-12);
}

TEST_CASE("non-finite sample raises DomainError") {
  CHECK_THROWS_AS(integrate_1d([](double x) { return x > 0.5 ? NAN : 1.0; }, Interval::finite(0.0, 1.0), {}),
                  DomainError);
}

TEST_CASE("tight tolerance with a small subdivision limit reports non-convergence") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 0.0;
  spec.max_subdivisions = 2;
  const QuadResult r =
      integrate_1d([](double x) { return std::sin(1.0 / x); }, Interval::finite(1e-3, 1.0), spec);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(require_converged(r, "probe"), ConvergenceError);
}

TEST_CASE("specification validation") {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec = {};
  spec.max_subdivisions = 0;
  CHECK_THROWS_AS(validate(spec), ValidationError);
  CHECK_NOTHROW(validate(QuadratureSpec{}));
  CHECK_NOTHROW(validate(sweep_accuracy()));
  CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, Interval::semi_infinite(-INFINITY), {}), ValidationError);
}

TEST_CASE("nested integration over rectangles and the half-plane") {
  const QuadratureSpec spec;
  const std::vector<Interval> square{Interval::finite(0.0, 1.0), Interval::finite(0.0, 2.0)};
  const QuadResult r = integrate_nested([](std::span<const double> x) { return x[0] * x[1]; }, square, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

  const std::vector<Interval> polar{Interval::finite(0.0, 2.0 * pi), Interval::semi_infinite(0.0)};
  const QuadResult g =
      integrate_nested([](std::span<const double> x) { return x[1] * std::exp(-x[1] * x[1]); }, polar, spec);
  CHECK(g.value == doctest::Approx(pi).epsilon(1e-9));

  const std::vector<Interval> cube{Interval::finite(0.0, 1.0), Interval::finite(0.0, 1.0), Interval::finite(0.0, 1.0)};
  const QuadResult c =
      integrate_nested([](std::span<const double> x) { return x[0] + x[1] * x[2]; }, cube, spec);
  CHECK(c.value == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("tracked inner errors propagate to the outer estimate") {
  QuadratureSpec inner;
  inner.rel_tol = 1e-4;
  const QuadResult r = integrate_1d_tracked(
      [&](double y) {
        return integrate_1d([y](double x) { return std::exp(-x * y); }, Interval::finite(0.0, 1.0), inner);
      },
      Interval::finite(1.0, 2.0), QuadratureSpec{});
  double expected = 0.0;
  // Integral over y in [1,2] of (1 - e^{-y}) / y.
  expected = integrate_1d([](double y) { return -std::expm1(-y) / y; }, Interval::finite(1.0, 2.0), {}).value;
  CHECK(std::abs(r.value - expected) <= r.error_estimate + 1e-12);
  CHECK(r.evaluations > 21 * 21);
}

TEST_CASE("property: linearity") {
  const QuadratureSpec spec;
  const Interval d = Interval::semi_infinite(0.0);
  auto f = [](double x) { return std::exp(-x) * std::cos(x); };
  auto g = [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };
  for (double a : {-2.0, 0.5, 3.0})
    for (double b : {-1.0, 4.0}) {
      const QuadResult rf = integrate_1d(f, d, spec);
      const QuadResult rg = integrate_1d(g, d, spec);
      const QuadResult rc = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, d, spec);
      const double tol = rc.error_estimate + std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate +
                         spec.tolerance_for(rc.value);
      CHECK(std::abs(rc.value - a * rf.value - b * rg.value) <= tol);
    }
}

TEST_CASE("property: split additivity") {
  const QuadratureSpec spec;
  auto f = [](double x) { return x * x * std::exp(-x); };
  const QuadResult whole = integrate_1d(f, Interval::semi_infinite(0.0), spec);
  for (double c : {0.1, 1.0, 2.5, 10.0}) {
    const QuadResult left = integrate_1d(f, Interval::finite(0.0, c), spec);
    const QuadResult right = integrate_1d(f, Interval::semi_infinite(c), spec);
    const double tol = whole.error_estimate + left.error_estimate + right.error_estimate + spec.tolerance_for(2.0);
    CHECK(std::abs(whole.value - left.value - right.value) <= tol);
  }
}

TEST_CASE("property: tightening changes the value by at most the loose error estimate") {
  QuadratureSpec loose;
  loose.rel_tol = 1e-5;
  for (double p : {0.3, 0.5, 0.8}) {
    auto f = [p](double t) { return std::pow(t, -p) / (1.0 + t); };
    const QuadResult a = integrate_1d(f, Interval::semi_infinite(0.0), loose);
    const QuadResult b = integrate_1d(f, Interval::semi_infinite(0.0), loose.tightened(10.0));
    CHECK(std::abs(b.value - a.value) <= a.error_estimate);
    CHECK(a.value == doctest::Approx(pi / std::sin(pi * (1.0 - p))).epsilon(1e-4));
  }
}

TEST_CASE("golden-section search") {
  const ScalarMinimum m = golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, 0.0, 4.0, 1e-8);
  CHECK(m.x == doctest::Approx(1.3).epsilon(1e-7));
  CHECK(m.fx == doctest::Approx(2.0));
}
