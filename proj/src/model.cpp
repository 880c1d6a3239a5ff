#include "hoskip/model.hpp"

#include <algorithm>

namespace hoskip {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

}  // namespace

SpeedLaw SpeedLaw::hyper_exponential_with_mean(double mean, double p, double ratio) {
  if (!(mean > 0.0)) throw ValidationError("mean", "must be > 0");
  // mean = p / (ratio * rate2) + (1 - p) / rate2
  const double rate2 = (p / ratio + (1.0 - p)) / mean;
  return hyper_exponential(p, ratio * rate2, rate2);
}

std::string SpeedLaw::name() const {
  return std::visit(overloaded{[](const Deterministic&) { return std::string("deterministic"); },
                               [](const Exponential&) { return std::string("exponential"); },
                               [](const Erlang& e) { return "erlang" + std::to_string(e.k); },
                               [](const HyperExponential&) { return std::string("hyperexponential"); }},
                    kind);
}

const NetworkParams& validate(const NetworkParams& net) {
  require_finite(net.lambda, "lambda");
  require_finite(net.beta, "beta");
  require_finite(net.sigma2, "sigma2");
  if (!(net.lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  if (!(net.beta > 2.0)) throw ValidationError("beta", "must exceed 2");
  if (!(net.sigma2 >= 0.0)) throw ValidationError("sigma2", "must be >= 0");
  return net;
}

const SkippingPolicy& validate(const SkippingPolicy& policy) {
  require_finite(policy.s, "s");
  require_finite(policy.cost, "cost");
  require_finite(policy.epsilon, "epsilon");
  if (!(policy.s > 0.0)) throw ValidationError("s", "must be > 0");
  if (!(policy.cost >= 0.0)) throw ValidationError("cost", "must be >= 0");
  if (!(policy.epsilon >= 0.0)) throw ValidationError("epsilon", "must be >= 0");
  return policy;
}

const SpeedLaw& validate(const SpeedLaw& law) {
  std::visit(overloaded{[](const Deterministic& d) {
                          require_finite(d.length, "length");
                          if (!(d.length >= 0.0)) throw ValidationError("length", "must be >= 0");
                        },
                        [](const Exponential& e) {
                          require_finite(e.mean, "mean");
                          if (!(e.mean > 0.0)) throw ValidationError("mean", "must be > 0");
                        },
                        [](const Erlang& e) {
                          require_finite(e.mean, "mean");
                          if (e.k < 1) throw ValidationError("k", "must be an integer >= 1");
                          if (!(e.mean > 0.0)) throw ValidationError("mean", "must be > 0");
                        },
                        [](const HyperExponential& h) {
                          if (!(h.p > 0.0 && h.p < 1.0)) throw ValidationError("p", "must lie in (0, 1)");
                          if (!(h.rate1 > 0.0) || !std::isfinite(h.rate1))
                            throw ValidationError("rate1", "must be > 0");
                          if (!(h.rate2 > 0.0) || !std::isfinite(h.rate2))
                            throw ValidationError("rate2", "must be > 0");
                        }},
             law.kind);
  return law;
}

double mean_displacement(const SpeedLaw& law) {
  return std::visit(overloaded{[](const Deterministic& d) { return d.length; },
                               [](const Exponential& e) { return e.mean; },
                               [](const Erlang& e) { return e.mean; },
                               [](const HyperExponential& h) { return h.p / h.rate1 + (1.0 - h.p) / h.rate2; }},
                    law.kind);
}

double displacement_density(const SpeedLaw& law, double x) {
  if (x < 0.0) return 0.0;
  return std::visit(
      overloaded{[](const Deterministic&) -> double {
                   throw ValidationError("law", "point mass has no density");
                 },
                 [x](const Exponential& e) { return std::exp(-x / e.mean) / e.mean; },
                 [x](const Erlang& e) {
                   const double rate = e.k / e.mean;
                   // rate^k x^(k-1) e^(-rate x) / (k-1)!
                   const double logd = e.k * std::log(rate) + (e.k - 1) * std::log(x) - rate * x -
                                       std::lgamma(static_cast<double>(e.k));
                   return x == 0.0 ? (e.k == 1 ? rate : 0.0) : std::exp(logd);
                 },
                 [x](const HyperExponential& h) {
                   return h.p * h.rate1 * std::exp(-h.rate1 * x) + (1.0 - h.p) * h.rate2 * std::exp(-h.rate2 * x);
                 }},
      law.kind);
}

double displacement_survival(const SpeedLaw& law, double x) {
  if (x < 0.0) return 1.0;
  return std::visit(overloaded{[x](const Deterministic& d) { return x < d.length ? 1.0 : 0.0; },
                               [x](const Exponential& e) { return std::exp(-x / e.mean); },
                               [x](const Erlang& e) {
                                 const double y = x * e.k / e.mean;
                                 double term = 1.0;
                                 double sum = 1.0;
                                 for (int i = 1; i < e.k; ++i) {
                                   term *= y / i;
                                   sum += term;
                                 }
                                 return std::exp(-y) * sum;
                               },
                               [x](const HyperExponential& h) {
                                 return h.p * std::exp(-h.rate1 * x) + (1.0 - h.p) * std::exp(-h.rate2 * x);
                               }},
                    law.kind);
}

double displacement_upper_quantile(const SpeedLaw& law, double tail) {
  if (law.is_point_mass()) return std::get<Deterministic>(law.kind).length;
  double hi = std::max(mean_displacement(law), 1e-12);
  while (displacement_survival(law, hi) > tail) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (displacement_survival(law, mid) > tail ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace hoskip
