#include "hoskip/handover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hoskip {

using std::numbers::pi;

double chord_distance(const ChordGeometry& g) {
  const double w2 = g.l * g.l + g.r * g.r - 2.0 * g.l * g.r * std::cos(g.theta);
  return std::sqrt(std::max(0.0, w2));
}

double excess_area(const ChordGeometry& g) {
  const double w = chord_distance(g);
  if (g.l == 0.0 || w == 0.0) return 0.0;
  // Direction of the serving BS as seen from the end point. It equals
  // theta + asin(l sin(theta) / w) only while the angle at the BS is acute.
  const double gamma = std::atan2(g.r * std::sin(g.theta), g.r * std::cos(g.theta) - g.l);
  const double b = w * w * gamma - g.r * g.r * g.theta + g.l * g.r * std::sin(g.theta);
  return std::max(0.0, b);
}

double expected_handovers_nonskip(double l, double lambda) {
  if (!(l >= 0.0)) throw ValidationError("l", "must be >= 0");
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  return 4.0 * std::sqrt(lambda) * l / pi;
}

QuadResult handover_probability_skip_quad(double l, double lambda, const QuadratureSpec& spec) {
  validate(spec);
  if (!(l >= 0.0)) throw ValidationError("l", "must be >= 0");
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  if (l == 0.0) return {0.0, 0.0, true, 0};

  // e^{-lambda pi r^2} < 1e-15 beyond r_max.
  const double r_max = 6.0 / std::sqrt(lambda * pi);
  const QuadratureSpec inner = spec.tightened(10.0);
  auto radial = [&](double theta) {
    auto f = [&](double r) {
      const double b = excess_area({l, r, theta});
      return r * std::exp(-lambda * pi * r * r) * -std::expm1(-lambda * b);
    };
    if (l < r_max) {
      QuadResult a = integrate_1d(f, Interval::finite(0.0, l), inner);
      const QuadResult c = integrate_1d(f, Interval::finite(l, r_max), inner);
      a.value += c.value;
      a.error_estimate += c.error_estimate;
      a.converged = a.converged && c.converged;
      a.evaluations += c.evaluations;
      return a;
    }
    return integrate_1d(f, Interval::finite(0.0, r_max), inner);
  };
  QuadResult outer = integrate_1d_tracked(radial, Interval::finite(0.0, pi), spec);
  outer.value *= 2.0 * lambda;
  outer.error_estimate *= 2.0 * lambda;
  outer.value = std::clamp(outer.value, 0.0, 1.0);
  return outer;
}

double handover_probability_skip(double l, double lambda, const QuadratureSpec& spec) {
  return require_converged(handover_probability_skip_quad(l, lambda, spec), "handover probability");
}

}  // namespace hoskip
