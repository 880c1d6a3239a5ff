#pragma once

#include <optional>

#include "hoskip/model.hpp"
#include "hoskip/numerics.hpp"

namespace hoskip {

struct SearchConfig {
  double s_min = 1.0;
  double s_max = 2000.0;
  int grid_points = 200;  // log-spaced
  double refine_tol = 0.01;
};

void validate(const SearchConfig& search);

struct OptResult {
  std::optional<double> s_star;
  std::optional<double> q_at_star;
  bool is_interior = false;
  /// The largest grid value sat on s_min or s_max.
  bool boundary_best = false;
};

/// Maximizes the continuous evaluation function over s: grid scan, then
/// golden-section refinement inside the best strict interior local maximum.
OptResult optimal_skipping_time_numeric(double v, const NetworkParams& net, double cost,
                                        const SearchConfig& search = {}, const QuadratureSpec& spec = {});

/// Small-speed closed form; depends only on beta and the cost.
double optimal_skipping_time_closed(double beta, double cost, const QuadratureSpec& spec = {});

/// Integral over z of K / ((1 + z) (1 + K)^2), the curvature constant of the closed form.
double rate_curvature_integral(double beta, const QuadratureSpec& spec = {});

}  // namespace hoskip
