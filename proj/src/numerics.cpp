#include "hoskip/numerics.hpp"

#include <vector>

namespace hoskip {

void validate(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) throw ValidationError("rel_tol", "must be > 0");
  if (!(spec.abs_tol >= 0.0)) throw ValidationError("abs_tol", "must be >= 0");
  if (spec.max_subdivisions < 1) throw ValidationError("max_subdivisions", "must be >= 1");
}

QuadratureSpec sweep_accuracy() {
  QuadratureSpec s;
  s.rel_tol = 1e-4;
  s.abs_tol = 1e-10;
  return s;
}

namespace {

QuadResult nested_level(const NestedIntegrand& f, std::span<const Interval> domains, std::size_t level,
                        std::vector<double>& x, const QuadratureSpec& spec) {
  if (level + 1 == domains.size()) {
    return integrate_1d(
        [&](double t) {
          x[level] = t;
          return f(std::span<const double>(x));
        },
        domains[level], spec);
  }
  const QuadratureSpec inner = spec.tightened(10.0);
  return integrate_1d_tracked(
      [&](double t) {
        x[level] = t;
        return nested_level(f, domains, level + 1, x, inner);
      },
      domains[level], spec);
}

}  // namespace

QuadResult integrate_nested(const NestedIntegrand& f, std::span<const Interval> domains,
                            const QuadratureSpec& spec) {
  validate(spec);
  if (domains.size() < 2 || domains.size() > 3)
    throw ValidationError("domains", "nested integration takes 2 or 3 variables");
  std::vector<double> x(domains.size(), 0.0);
  return nested_level(f, domains, 0, x, spec);
}

double require_converged(const QuadResult& r, const char* integral) {
  if (!r.converged) throw ConvergenceError(integral, r.value, r.error_estimate);
  return r.value;
}

}  // namespace hoskip
