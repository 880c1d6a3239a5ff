#include "hoskip/evaluation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "hoskip/handover.hpp"

namespace hoskip {

using std::numbers::pi;

namespace {

constexpr double kLawTail = 1e-10;

int integer_skipping_time(double s) {
  const double rounded = std::round(s);
  if (std::abs(s - rounded) > 1e-9 || rounded < 1.0)
    throw ValidationError("s", "must be an integer >= 1 for the discrete data sum");
  return static_cast<int>(rounded);
}

void require_interference_limited(const NetworkParams& net) {
  if (net.sigma2 != 0.0) throw ValidationError("sigma2", "approximate rates require sigma2 = 0");
}

// Sum over offsets of tau2_approx weighted by (1 - w_t), as one z-integral.
QuadResult weighted_approx_sum(std::span<const double> offsets, std::span<const double> weights,
                               const NetworkParams& net, const QuadratureSpec& spec) {
  const double beta = net.beta;
  const double lambda = net.lambda;
  return integrate_1d(
      [&](double x) {
        const double k = k_factor(std::expm1(x), beta);
        const double a = pi * lambda / (1.0 + 1.0 / k);
        double acc = 0.0;
        for (std::size_t t = 0; t < offsets.size(); ++t) acc += weights[t] * std::exp(-a * offsets[t] * offsets[t]);
        return acc / (1.0 + k);
      },
      Interval::semi_infinite(0.0, 1.0), spec);
}

// Data sum at the given offsets for a fixed tau1.
QuadResult stale_data_sum(std::span<const double> offsets, double tau1_value, const NetworkParams& net,
                          const RateMethod& method, const QuadratureSpec& spec) {
  if (method.kind == RateMethod::Kind::exact) {
    QuadResult out{0.0, 0.0, true, 0};
    for (double u : offsets) {
      if (u == 0.0) {
        out.value += tau1_value;
        continue;
      }
      const QuadResult r = tau2_exact_quad({u, net, spec});
      out.value += r.value;
      out.error_estimate += r.error_estimate;
      out.converged = out.converged && r.converged;
      out.evaluations += r.evaluations;
    }
    return out;
  }
  require_interference_limited(net);
  std::vector<double> blend(offsets.size(), 1.0);
  double tau1_weight = 0.0;
  if (method.kind == RateMethod::Kind::refined) {
    for (std::size_t t = 0; t < offsets.size(); ++t) {
      const double w = std::exp(-method.epsilon * offsets[t]);
      tau1_weight += w;
      blend[t] = 1.0 - w;
    }
  }
  QuadResult r = weighted_approx_sum(offsets, blend, net, spec);
  r.value += tau1_weight * tau1_value;
  return r;
}

std::vector<double> offsets_for(int s, double l) {
  std::vector<double> u(static_cast<std::size_t>(s));
  for (int t = 0; t < s; ++t) u[static_cast<std::size_t>(t)] = l * t / s;
  return u;
}

// E_L[g(L)] where g returns a QuadResult; point masses are evaluated directly.
template <class G>
QuadResult expectation_over_law(const SpeedLaw& law, G&& g, const QuadratureSpec& spec) {
  if (law.is_point_mass()) return g(mean_displacement(law));
  const double hi = displacement_upper_quantile(law, kLawTail);
  return integrate_1d_tracked(
      [&](double l) {
        const double density = displacement_density(law, l);
        QuadResult r = g(l);
        r.value *= density;
        r.error_estimate *= density;
        return r;
      },
      Interval::finite(0.0, hi), spec);
}

}  // namespace

void validate(const EvaluationQuery& q) {
  validate(q.policy);
  validate(q.net);
  validate(q.law);
  validate(q.spec);
  if (q.rate_method.kind != RateMethod::Kind::exact) require_interference_limited(q.net);
  if (q.rate_method.kind == RateMethod::Kind::refined && !(q.rate_method.epsilon >= 0.0))
    throw ValidationError("epsilon", "must be >= 0");
}

double d1(double s, const NetworkParams& net, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw ValidationError("s", "must be >= 0");
  return s * tau1(net, spec);
}

QuadResult d2_quad(int s, double l, const NetworkParams& net, const RateMethod& method, const QuadratureSpec& spec) {
  validate(net);
  if (s < 1) throw ValidationError("s", "must be an integer >= 1");
  if (!(l >= 0.0)) throw ValidationError("l", "must be >= 0");
  if (method.kind != RateMethod::Kind::exact) require_interference_limited(net);
  const double t1 = tau1(net, spec);
  const std::vector<double> u = offsets_for(s, l);
  return stale_data_sum(u, t1, net, method, spec);
}

double d2(int s, double l, const NetworkParams& net, const RateMethod& method, const QuadratureSpec& spec) {
  return require_converged(d2_quad(s, l, net, method, spec), "d2");
}

double expected_n2(const SpeedLaw& law, double lambda, const QuadratureSpec& spec) {
  validate(law);
  const QuadratureSpec inner = spec.tightened(10.0);
  return require_converged(
      expectation_over_law(
          law, [&](double l) { return handover_probability_skip_quad(l, lambda, inner); }, spec),
      "expected handover probability");
}

double q1(const EvaluationQuery& q) {
  validate(q);
  const double t1 = tau1(q.net, q.spec);
  const double handovers = expected_handovers_nonskip(mean_displacement(q.law), q.net.lambda);
  return t1 - q.policy.cost * handovers / q.policy.s;
}

double q2(const EvaluationQuery& q) {
  validate(q);
  const int s = integer_skipping_time(q.policy.s);
  const double t1 = tau1(q.net, q.spec);
  const QuadratureSpec inner = q.spec.tightened(10.0);
  const QuadResult total = expectation_over_law(
      q.law,
      [&](double l) {
        const std::vector<double> u = offsets_for(s, l);
        QuadResult data = stale_data_sum(u, t1, q.net, q.rate_method, inner);
        if (q.policy.cost > 0.0) {
          const QuadResult n2 = handover_probability_skip_quad(l, q.net.lambda, inner);
          data.value -= q.policy.cost * n2.value;
          data.error_estimate += q.policy.cost * n2.error_estimate;
          data.converged = data.converged && n2.converged;
        }
        return data;
      },
      q.spec);
  return require_converged(total, "q2") / s;
}

QuadResult q_tilde_quad(double s, double v, const NetworkParams& net, double cost, const QuadratureSpec& spec) {
  validate(net);
  validate(spec);
  require_interference_limited(net);
  if (!(s > 0.0)) throw ValidationError("s", "must be > 0");
  if (!(v >= 0.0)) throw ValidationError("v", "must be >= 0");
  if (!(cost >= 0.0)) throw ValidationError("cost", "must be >= 0");
  const double l = s * v;
  const double beta = net.beta;
  const double lambda = net.lambda;
  // (1/l) * integral over [0, l] of tau2_approx, with the u-integral done in closed form.
  QuadResult data = integrate_1d(
      [&](double x) {
        const double k = k_factor(std::expm1(x), beta);
        const double root = std::sqrt(pi * lambda / (1.0 + 1.0 / k)) * l;
        const double mean_gauss = root < 1e-8 ? 1.0 - root * root / 3.0 : std::sqrt(pi) * std::erf(root) / (2.0 * root);
        return mean_gauss / (1.0 + k);
      },
      Interval::semi_infinite(0.0, 1.0), spec);
  if (cost > 0.0 && l > 0.0) {
    const QuadResult n2 = handover_probability_skip_quad(l, lambda, spec);
    data.value -= cost / s * n2.value;
    data.error_estimate += cost / s * n2.error_estimate;
    data.converged = data.converged && n2.converged;
    data.evaluations += n2.evaluations;
  }
  return data;
}

double q_tilde(double s, double v, const NetworkParams& net, double cost, const QuadratureSpec& spec) {
  return require_converged(q_tilde_quad(s, v, net, cost, spec), "q_tilde");
}

}  // namespace hoskip
