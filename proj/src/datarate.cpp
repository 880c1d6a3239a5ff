#include "hoskip/datarate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hoskip/handover.hpp"

namespace hoskip {

using std::numbers::pi;

namespace {

// Integral of y / (1 + y^beta) over [0, inf).
double tail_total(double beta) { return (pi / beta) / std::sin(2.0 * pi / beta); }

constexpr double kSeriesLow = 0.8;
constexpr double kSeriesHigh = 1.25;

// Alternating series of the tail for y >= kSeriesHigh.
double tail_series_high(double y, double beta) {
  const double x = std::pow(y, -beta);
  double power = y * y * x;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = power / (beta * (k + 1) - 2.0);
    sum += (k % 2 == 0) ? term : -term;
    if (term < 1e-17 * std::abs(sum)) break;
    power *= x;
  }
  return sum;
}

// Alternating series of the head integral over [0, y] for y <= kSeriesLow.
double head_series_low(double y, double beta) {
  const double x = std::pow(y, beta);
  double power = y * y;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = power / (2.0 + beta * k);
    sum += (k % 2 == 0) ? term : -term;
    if (term < 1e-17 * std::abs(sum)) break;
    power *= x;
  }
  return sum;
}

// Kronrod rule on [a, b] for the smooth middle band.
double band_integral(double a, double b, double beta) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto f = [beta](double y) { return y / (1.0 + std::pow(y, beta)); };
  double sum = detail::kWgk[10] * f(c);
  for (int j = 0; j < 10; ++j) sum += detail::kWgk[j] * (f(c - h * detail::kXgk[j]) + f(c + h * detail::kXgk[j]));
  return sum * h;
}

QuadResult scaled(QuadResult r, double factor) {
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  return r;
}

QuadResult sum_of(const QuadResult& a, const QuadResult& b) {
  return {a.value + b.value, a.error_estimate + b.error_estimate, a.converged && b.converged,
          a.evaluations + b.evaluations};
}

// 1 + A(z): the Laplace exponent of interference beyond the serving distance,
// per unit of lambda pi r^2.
double nearest_interference_factor(double z, double beta) {
  if (z <= 0.0) return 1.0;
  return 1.0 + 2.0 * std::pow(z, 2.0 / beta) * interference_tail(std::pow(z, -1.0 / beta), beta);
}

// Evaluates the stale-association rate at offset u by nesting
// theta (BS bearing) -> r (BS distance) -> z (log transform) -> phi (ray direction from the UE).
class StaleRateIntegral {
 public:
  StaleRateIntegral(const RateQuery& q, long long budget)
      : u_(q.u), lambda_(q.net.lambda), beta_(q.net.beta), sigma2_(q.net.sigma2), spec_(q.spec),
        budget_(budget), total_(tail_total(q.net.beta)) {}

  QuadResult evaluate() {
    const QuadResult theta_part = integrate_1d_tracked(
        [this](double theta) { return radial(theta); }, Interval::finite(0.0, pi), spec_);
    QuadResult out = scaled(theta_part, 2.0 * lambda_);
    out.evaluations = evaluations_;
    return out;
  }

  long long evaluations() const { return evaluations_; }

 private:
  QuadResult radial(double theta) {
    const QuadratureSpec spec = spec_.tightened(10.0);
    const double r_max = std::max(6.0 / std::sqrt(lambda_ * pi), u_);
    auto f = [this, theta](double r) {
      QuadResult inner = over_z(r, theta);
      return scaled(inner, r * std::exp(-lambda_ * pi * r * r));
    };
    if (u_ > 0.0) {
      return sum_of(integrate_1d_tracked(f, Interval::finite(0.0, u_), spec),
                    integrate_1d_tracked(f, Interval::finite(u_, r_max), spec));
    }
    return integrate_1d_tracked(f, Interval::finite(0.0, r_max), spec);
  }

  QuadResult over_z(double r, double theta) {
    const double w = chord_distance({u_, r, theta});
    const QuadratureSpec spec = spec_.tightened(100.0);
    if (w == 0.0) return {0.0, 0.0, true, 0};
    const double wb = std::pow(w, beta_);
    // Integrate in x = log(1 + z); rho2 falls off around lambda pi w^2 z^(2/beta) ~ 1.
    const double x_scale = std::max(1.0, std::log1p(std::pow(lambda_ * pi * w * w, -beta_ / 2.0)));
    return integrate_1d_tracked(
        [&](double x) -> QuadResult {
          const double z = std::expm1(x);
          const double sz = w * std::pow(z, 1.0 / beta_);
          const QuadResult j = laplace_exponent(r, sz);
          const double rho = std::exp(-lambda_ * sz * sz * j.value);
          const double noise = sigma2_ > 0.0 ? std::exp(-sigma2_ * wb * z) : 1.0;
          const double value = noise * rho;
          const double err = value == 0.0 ? 0.0 : value * lambda_ * sz * sz * j.error_estimate;
          return {value, err, j.converged, 0};
        },
        Interval::semi_infinite(0.0, x_scale), spec);
  }

  // Angular integral J such that the conditional interference Laplace transform
  // is exp(-lambda s^2 J), with s = w z^(1/beta) the normalizing distance.
  QuadResult laplace_exponent(double r, double s) {
    if (s == 0.0) return {0.0, 0.0, true, 0};
    if (u_ == 0.0) {
      ++evaluations_;
      return {2.0 * pi * interference_tail(r / s, beta_), 0.0, true, 1};
    }
    const QuadratureSpec spec = spec_.tightened(1000.0);
    QuadResult res;
    if (u_ < r) {
      // The UE sits inside the empty disk; every ray leaves it at rho_max(phi).
      res = integrate_1d(
          [&](double phi) {
            const double sp = std::sin(phi);
            const double edge = -u_ * std::cos(phi) + std::sqrt(std::max(0.0, r * r - u_ * u_ * sp * sp));
            return interference_tail(edge / s, beta_);
          },
          Interval::finite(0.0, pi), spec);
      res = scaled(res, 2.0);
    } else {
      // Rays within alpha of the origin direction cross the empty disk between rho1 and rho2.
      const double alpha = std::asin(std::min(1.0, r / u_));
      QuadResult gap = integrate_1d(
          [&](double t) {
            const double psi = alpha * (1.0 - t * t);
            const double sp = std::sin(psi);
            const double half = std::sqrt(std::max(0.0, r * r - u_ * u_ * sp * sp));
            const double mid = u_ * std::cos(psi);
            const double near = std::max(0.0, mid - half);
            return (interference_tail(near / s, beta_) - interference_tail((mid + half) / s, beta_)) * 2.0 *
                   alpha * t;
          },
          Interval::finite(0.0, 1.0), spec);
      res = {2.0 * pi * total_ - 2.0 * gap.value, 2.0 * gap.error_estimate, gap.converged, gap.evaluations};
    }
    evaluations_ += res.evaluations;
    if (evaluations_ > budget_) throw BudgetExceededError("tau2 exact", evaluations_);
    return res;
  }

  double u_;
  double lambda_;
  double beta_;
  double sigma2_;
  QuadratureSpec spec_;
  long long budget_;
  double total_;
  long long evaluations_ = 0;
};

void require_interference_limited(const NetworkParams& net) {
  if (net.sigma2 != 0.0) throw ValidationError("sigma2", "approximation requires sigma2 = 0");
}

void validate_query(const RateQuery& q) {
  validate(q.net);
  validate(q.spec);
  if (!(q.u >= 0.0) || !std::isfinite(q.u)) throw ValidationError("u", "must be >= 0");
}

}  // namespace

double k_factor(double z, double beta) {
  return (2.0 * pi / beta) * std::pow(z, 2.0 / beta) / std::sin(2.0 * pi / beta);
}

double interference_tail(double y, double beta) {
  if (!(y > 0.0)) return tail_total(beta);
  if (std::isinf(y)) return 0.0;
  if (y >= kSeriesHigh) return tail_series_high(y, beta);
  if (y <= kSeriesLow) return tail_total(beta) - head_series_low(y, beta);
  return tail_series_high(kSeriesHigh, beta) + band_integral(y, kSeriesHigh, beta);
}

QuadResult tau1_quad(const NetworkParams& net, const QuadratureSpec& spec) {
  validate(net);
  validate(spec);
  const double beta = net.beta;
  if (net.sigma2 == 0.0) {
    // x = log(1 + z) absorbs the 1 / (1 + z) factor.
    return integrate_1d([beta](double x) { return 1.0 / nearest_interference_factor(std::expm1(x), beta); },
                        Interval::semi_infinite(0.0, 1.0), spec);
  }
  // With noise, keep the serving-distance variable v = lambda pi r^2 explicit.
  const double lambda = net.lambda;
  const double sigma2 = net.sigma2;
  const QuadratureSpec inner = spec.tightened(10.0);
  return integrate_1d_tracked(
      [&](double x) {
        const double z = std::expm1(x);
        const double a = nearest_interference_factor(z, beta);
        if (!std::isfinite(z) || !std::isfinite(a)) return QuadResult{0.0, 0.0, true, 0};
        QuadResult r = integrate_1d(
            [&](double v) {
              return std::exp(-sigma2 * z * std::pow(v / (pi * lambda), beta / 2.0) - v * a);
            },
            Interval::semi_infinite(0.0, 1.0 / a), inner);
        return r;
      },
      Interval::semi_infinite(0.0, 1.0), spec);
}

double tau1(const NetworkParams& net, const QuadratureSpec& spec) {
  return require_converged(tau1_quad(net, spec), "tau1");
}

QuadResult tau2_exact_quad(const RateQuery& q, long long budget) {
  validate_query(q);
  StaleRateIntegral integral(q, budget);
  return integral.evaluate();
}

double tau2_exact(const RateQuery& q, long long budget) {
  return require_converged(tau2_exact_quad(q, budget), "tau2 exact");
}

QuadResult tau2_approx_quad(const RateQuery& q) {
  validate_query(q);
  require_interference_limited(q.net);
  const double beta = q.net.beta;
  const double a = pi * q.net.lambda * q.u * q.u;
  return integrate_1d(
      [=](double x) {
        const double k = k_factor(std::expm1(x), beta);
        return std::exp(-a / (1.0 + 1.0 / k)) / (1.0 + k);
      },
      Interval::semi_infinite(0.0, 1.0), q.spec);
}

double tau2_approx(const RateQuery& q) { return require_converged(tau2_approx_quad(q), "tau2 approx"); }

double refined_blend(double u, double epsilon, double tau1_value, double tau2_approx_value) {
  const double weight = std::exp(-epsilon * u);
  return weight * tau1_value + (1.0 - weight) * tau2_approx_value;
}

double tau2_refined(const RateQuery& q, double epsilon) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon", "must be >= 0");
  const double t1 = tau1(q.net, q.spec);
  if (epsilon * q.u == 0.0) {
    validate_query(q);
    require_interference_limited(q.net);
    return t1;
  }
  return refined_blend(q.u, epsilon, t1, tau2_approx(q));
}

double fit_epsilon(std::span<const double> u_grid, double tau1_value, std::span<const double> exact,
                   std::span<const double> approx) {
  if (u_grid.empty()) throw ValidationError("u_grid", "must be nonempty");
  if (exact.size() != u_grid.size() || approx.size() != u_grid.size())
    throw ValidationError("u_grid", "rate vectors must match the grid");
  auto sse = [&](double eps) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
      const double d = refined_blend(u_grid[i], eps, tau1_value, approx[i]) - exact[i];
      acc += d * d;
    }
    return acc;
  };
  constexpr double kMax = 100.0;
  constexpr int kSteps = 2000;
  int best = 0;
  double best_value = sse(0.0);
  for (int i = 1; i <= kSteps; ++i) {
    const double v = sse(kMax * i / kSteps);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = kMax * std::max(0, best - 1) / kSteps;
  const double hi = kMax * std::min(kSteps, best + 1) / kSteps;
  const ScalarMinimum refined = golden_section_minimize(sse, lo, hi, 1e-9);
  return refined.fx < best_value ? refined.x : kMax * best / kSteps;
}

double fit_epsilon(const NetworkParams& net, std::span<const double> u_grid, const QuadratureSpec& spec) {
  validate(net);
  require_interference_limited(net);
  if (u_grid.empty()) throw ValidationError("u_grid", "must be nonempty");
  const double t1 = tau1(net, spec);
  std::vector<double> exact;
  std::vector<double> approx;
  for (double u : u_grid) {
    const RateQuery q{u, net, spec};
    exact.push_back(tau2_exact(q));
    approx.push_back(tau2_approx(q));
  }
  return fit_epsilon(u_grid, t1, exact, approx);
}

}  // namespace hoskip
