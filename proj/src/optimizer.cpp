#include "hoskip/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "hoskip/datarate.hpp"
#include "hoskip/evaluation.hpp"

namespace hoskip {

using std::numbers::pi;

void validate(const SearchConfig& search) {
  if (!(search.s_min > 0.0)) throw ValidationError("s_min", "must be > 0");
  if (!(search.s_min < search.s_max)) throw ValidationError("s_max", "must exceed s_min");
  if (search.grid_points < 3) throw ValidationError("grid_points", "must be >= 3");
  if (!(search.refine_tol > 0.0)) throw ValidationError("refine_tol", "must be > 0");
}

OptResult optimal_skipping_time_numeric(double v, const NetworkParams& net, double cost, const SearchConfig& search,
                                        const QuadratureSpec& spec) {
  validate(net);
  validate(search);
  validate(spec);
  if (net.sigma2 != 0.0) throw ValidationError("sigma2", "the optimizer requires sigma2 = 0");
  if (!(v > 0.0)) throw ValidationError("v", "must be > 0");
  if (!(cost >= 0.0)) throw ValidationError("cost", "must be >= 0");

  const int n = search.grid_points;
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<QuadResult> q(static_cast<std::size_t>(n));
  const double log_ratio = std::log(search.s_max / search.s_min);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    s[k] = i == n - 1 ? search.s_max : search.s_min * std::exp(log_ratio * i / (n - 1));
    q[k] = q_tilde_quad(s[k], v, net, cost, spec);
    require_converged(q[k], "q_tilde");
  }

  OptResult out;
  std::size_t best_grid = 0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (q[k].value > q[best_grid].value) best_grid = k;
  out.boundary_best = best_grid == 0 || best_grid + 1 == s.size();

  std::size_t best = 0;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double err = q[k].error_estimate;
    const bool is_peak = q[k].value > q[k - 1].value + err + q[k - 1].error_estimate &&
                         q[k].value > q[k + 1].value + err + q[k + 1].error_estimate;
    if (is_peak && (best == 0 || q[k].value > q[best].value)) best = k;
  }
  if (best == 0) return out;

  const auto refined = golden_section_minimize([&](double x) { return -q_tilde(x, v, net, cost, spec); }, s[best - 1],
                                               s[best + 1], search.refine_tol);
  double s_star = s[best];
  double q_star = q[best].value;
  if (-refined.fx > q_star) {
    s_star = refined.x;
    q_star = -refined.fx;
  }
  out.s_star = s_star;
  out.q_at_star = q_star;
  out.is_interior = true;
  return out;
}

double rate_curvature_integral(double beta, const QuadratureSpec& spec) {
  if (!(beta > 2.0)) throw ValidationError("beta", "must be > 2");
  validate(spec);
  // In x = log(1 + z) the factor 1 / (1 + z) is absorbed by dz = (1 + z) dx.
  return require_converged(integrate_1d(
                               [&](double x) {
                                 const double k = k_factor(std::expm1(x), beta);
                                 return std::isinf(k) ? 0.0 : k / ((1.0 + k) * (1.0 + k));
                               },
                               Interval::semi_infinite(0.0, 1.0), spec),
                           "rate curvature integral");
}

double optimal_skipping_time_closed(double beta, double cost, const QuadratureSpec& spec) {
  if (!(cost >= 0.0)) throw ValidationError("cost", "must be >= 0");
  const double factor = (15.0 - pi * pi) / (4.0 * pi * pi);
  return factor * cost / rate_curvature_integral(beta, spec);
}

}  // namespace hoskip
