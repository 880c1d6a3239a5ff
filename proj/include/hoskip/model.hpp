#pragma once

// Parameter types shared by the analytic and simulation code.
// Units: km, seconds, nats (natural log). Transmit power is normalized to 1.

#include <cmath>
#include <string>
#include <variant>

#include "hoskip/errors.hpp"

namespace hoskip {

struct NetworkParams {
  double lambda = 1.0;  // BS intensity, units/km^2
  double beta = 4.0;    // path-loss exponent, > 2
  double sigma2 = 0.0;  // noise power

  bool interference_limited() const { return sigma2 == 0.0; }
};

struct SkippingPolicy {
  double s = 1.0;        // skipping time, seconds
  double cost = 0.0;     // data-equivalent handover cost, nats
  double epsilon = 0.0;  // refinement fitting parameter, 1/km
};

struct Deterministic {
  double length;
};
struct Exponential {
  double mean;
};
struct Erlang {
  int k;
  double mean;
};
struct HyperExponential {
  double p;  // weight of the first branch
  double rate1;
  double rate2;
};

/// Law of the displacement L covered in one movement period (km).
struct SpeedLaw {
  std::variant<Deterministic, Exponential, Erlang, HyperExponential> kind;

  static SpeedLaw deterministic(double l) { return {Deterministic{l}}; }
  static SpeedLaw exponential(double mean) { return {Exponential{mean}}; }
  static SpeedLaw erlang(int k, double mean) { return {Erlang{k, mean}}; }
  static SpeedLaw hyper_exponential(double p, double rate1, double rate2) {
    return {HyperExponential{p, rate1, rate2}};
  }
  /// Two-branch hyper-exponential with rate1 = ratio * rate2 and the given mean.
  static SpeedLaw hyper_exponential_with_mean(double mean, double p = 0.5, double ratio = 3.0);

  bool is_point_mass() const { return std::holds_alternative<Deterministic>(kind); }
  std::string name() const;
};

/// One straight leg of the walk: displacement l covered in s seconds.
struct MovementPeriod {
  double l = 0.0;
  double s = 1.0;

  double speed() const { return l / s; }
  /// Offset along the segment at discrete time t.
  double offset(int t) const { return l * static_cast<double>(t) / s; }
};

const NetworkParams& validate(const NetworkParams& net);
const SkippingPolicy& validate(const SkippingPolicy& policy);
const SpeedLaw& validate(const SpeedLaw& law);

double mean_displacement(const SpeedLaw& law);

/// Density of L at x for the continuous laws; throws for the point mass.
double displacement_density(const SpeedLaw& law, double x);

/// P(L > x).
double displacement_survival(const SpeedLaw& law, double x);

/// Smallest x with P(L > x) <= tail (bisection on the survival function).
double displacement_upper_quantile(const SpeedLaw& law, double tail);

/// Draws L by inversion from uniform variates in (0, 1) supplied by `uniform()`.
template <class UniformSource>
double sample_displacement(const SpeedLaw& law, UniformSource&& uniform) {
  struct Visitor {
    UniformSource& u;
    double operator()(const Deterministic& d) const { return d.length; }
    double operator()(const Exponential& e) const { return -e.mean * std::log(u()); }
    double operator()(const Erlang& e) const {
      double logsum = 0.0;
      for (int i = 0; i < e.k; ++i) logsum += std::log(u());
      return -(e.mean / e.k) * logsum;
    }
    double operator()(const HyperExponential& h) const {
      const double rate = u() < h.p ? h.rate1 : h.rate2;
      return -std::log(u()) / rate;
    }
  };
  return std::visit(Visitor{uniform}, law.kind);
}

}  // namespace hoskip
