#pragma once

// Received data per movement period and the per-second evaluation functions
// Q1 (hand over at every crossing) and Q2 (hand over only at period ends).

#include <span>

#include "hoskip/datarate.hpp"
#include "hoskip/model.hpp"
#include "hoskip/numerics.hpp"

namespace hoskip {

/// Which tau2 variant feeds the stale-association data term.
struct RateMethod {
  enum class Kind { exact, approx, refined };
  Kind kind = Kind::refined;
  double epsilon = 0.0;

  static RateMethod exact() { return {Kind::exact, 0.0}; }
  static RateMethod approx() { return {Kind::approx, 0.0}; }
  static RateMethod refined(double epsilon) { return {Kind::refined, epsilon}; }
};

struct EvaluationQuery {
  SkippingPolicy policy;
  NetworkParams net;
  SpeedLaw law = SpeedLaw::deterministic(0.0);
  RateMethod rate_method;
  QuadratureSpec spec;
};

void validate(const EvaluationQuery& q);

/// Expected data over s seconds with nearest-BS association: s * tau1.
double d1(double s, const NetworkParams& net, const QuadratureSpec& spec = {});

/// Sum of the chosen tau2 variant at offsets l t / s, t = 0 .. s-1 (s integer).
QuadResult d2_quad(int s, double l, const NetworkParams& net, const RateMethod& method, const QuadratureSpec& spec = {});
double d2(int s, double l, const NetworkParams& net, const RateMethod& method, const QuadratureSpec& spec = {});

/// E over L of the handover probability N2(L, lambda).
double expected_n2(const SpeedLaw& law, double lambda, const QuadratureSpec& spec = {});

double q1(const EvaluationQuery& q);
double q2(const EvaluationQuery& q);

/// Continuous relaxation in s at constant speed v, interference-limited.
QuadResult q_tilde_quad(double s, double v, const NetworkParams& net, double cost, const QuadratureSpec& spec = {});
double q_tilde(double s, double v, const NetworkParams& net, double cost, const QuadratureSpec& spec = {});

}  // namespace hoskip
