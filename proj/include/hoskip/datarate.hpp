#pragma once

// Expected downlink data rates (nats per unit time) for a UE served by the BS
// nearest to its current position (tau1) or by the BS nearest to the start of
// its movement period while sitting at offset u (tau2 and its approximations).

#include <cstdint>
#include <span>
#include <vector>

#include "hoskip/model.hpp"
#include "hoskip/numerics.hpp"

namespace hoskip {

struct RateQuery {
  double u = 0.0;  // offset from the period start, km
  NetworkParams net;
  QuadratureSpec spec;
};

/// (2 pi / beta) z^(2/beta) csc(2 pi / beta).
double k_factor(double z, double beta);

/// T(Y) = integral over [Y, inf) of y / (1 + y^beta) dy. Interference from
/// interferers beyond normalized distance Y, per unit angle.
double interference_tail(double y, double beta);

QuadResult tau1_quad(const NetworkParams& net, const QuadratureSpec& spec = {});
double tau1(const NetworkParams& net, const QuadratureSpec& spec = {});

/// Default integrand-evaluation budget for tau2_exact.
inline constexpr long long kTau2DefaultBudget = 4'000'000'000LL;

QuadResult tau2_exact_quad(const RateQuery& q, long long budget = kTau2DefaultBudget);
/// Exact rate at offset u under stale association. Throws ConvergenceError or
/// BudgetExceededError (distinct failure modes).
double tau2_exact(const RateQuery& q, long long budget = kTau2DefaultBudget);

/// Interference-limited approximation ignoring the empty disk around the start point.
QuadResult tau2_approx_quad(const RateQuery& q);
double tau2_approx(const RateQuery& q);

/// e^{-eps u} tau1 + (1 - e^{-eps u}) tau2_approx.
double tau2_refined(const RateQuery& q, double epsilon);
/// The same blend from already evaluated components.
double refined_blend(double u, double epsilon, double tau1_value, double tau2_approx_value);

/// Epsilon in [0, 100] minimizing the squared deviation of tau2_refined from
/// tau2_exact over `u_grid`.
double fit_epsilon(const NetworkParams& net, std::span<const double> u_grid, const QuadratureSpec& spec = {});

/// Same fit from precomputed rates at each grid point.
double fit_epsilon(std::span<const double> u_grid, double tau1_value, std::span<const double> exact,
                   std::span<const double> approx);

}  // namespace hoskip
