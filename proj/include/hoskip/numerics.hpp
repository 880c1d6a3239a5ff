#pragma once

// Adaptive Gauss-Kronrod quadrature for finite and semi-infinite intervals,
// plus tensor-nested integration for 2- and 3-variable integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "hoskip/errors.hpp"

namespace hoskip {

enum class InfiniteTransform { rational, exponential };

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  InfiniteTransform infinite_transform = InfiniteTransform::rational;

  /// Tolerances divided by `factor`, subdivision limit unchanged.
  QuadratureSpec tightened(double factor) const {
    QuadratureSpec s = *this;
    s.rel_tol /= factor;
    s.abs_tol /= factor;
    return s;
  }

  double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

/// Throws ValidationError when an invariant is broken.
void validate(const QuadratureSpec& spec);

/// The reduced-accuracy setting used for parameter sweeps.
QuadratureSpec sweep_accuracy();

/// Integration interval. `hi` may be +infinity; `scale` is the characteristic
/// length used by the [lo, inf) change of variables.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double scale = 1.0;

  static Interval finite(double lo, double hi) { return {lo, hi, 1.0}; }
  static Interval semi_infinite(double lo, double scale = 1.0) {
    return {lo, std::numeric_limits<double>::infinity(), scale};
  }
  bool is_semi_infinite() const { return std::isinf(hi); }
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  long long evaluations = 0;
};

namespace detail {

// Kronrod 21-point abscissae with the embedded 10-point Gauss rule.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980202480, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651277};

/// Integrand value carrying the error of an inner integral along with it.
struct Tracked {
  double value = 0.0;
  double error = 0.0;
};

inline double primary(double v) { return v; }
inline double primary(const Tracked& v) { return v.value; }
inline double secondary(double) { return 0.0; }
inline double secondary(const Tracked& v) { return v.error; }

template <class V>
struct Segment {
  double a;
  double b;
  double value;
  double aux;  // integral of the carried inner error
  double error;
};

template <class V, class G>
Segment<V> kronrod21(G& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  std::array<double, 21> ev{};
  auto sample = [&](double x) -> std::pair<double, double> {
    const V v = g(x);
    const double p = primary(v);
    if (!std::isfinite(p)) throw DomainError(x, "non-finite integrand sample");
    return {p, secondary(v)};
  };
  auto [fc, ec] = sample(center);
  double res_k = fc * kWgk[10];
  double aux = ec * kWgk[10];
  double res_g = 0.0;
  double res_abs = std::abs(res_k);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    auto [f1, e1] = sample(center - dx);
    auto [f2, e2] = sample(center + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    ev[2 * j] = e1;
    ev[2 * j + 1] = e2;
    res_k += kWgk[j] * (f1 + f2);
    aux += kWgk[j] * (e1 + e2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    res_asc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

  const double ahalf = std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  res_asc *= ahalf;
  res_abs *= ahalf;
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * res_abs, err);
  return {a, b, res_k * half, std::abs(aux * half), err};
}

/// Adaptive bisection on a finite interval of the already-transformed integrand.
template <class V, class G>
QuadResult adaptive(G&& g, double a, double b, const QuadratureSpec& spec) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  auto cmp = [](const Segment<V>& x, const Segment<V>& y) { return x.error < y.error; };
  std::vector<Segment<V>> heap;
  heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 2);
  heap.push_back(kronrod21<V>(g, a, b));
  out.evaluations = 21;
  double value = heap.front().value;
  double error = heap.front().error;
  double aux = heap.front().aux;
  int subdivisions = 0;
  bool converged = false;
  for (;;) {
    const double tol = spec.tolerance_for(value);
    if (error + aux <= tol) {
      converged = true;
      break;
    }
    // Outer error already small: nothing left to gain by bisecting.
    if (error <= 0.1 * tol) break;
    if (subdivisions >= spec.max_subdivisions) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const Segment<V> worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    Segment<V> left = kronrod21<V>(g, worst.a, mid);
    Segment<V> right = kronrod21<V>(g, mid, worst.b);
    out.evaluations += 42;
    ++subdivisions;
    value += left.value + right.value - worst.value;
    aux += left.aux + right.aux - worst.aux;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  // Re-sum to shed drift from the running updates.
  value = 0.0;
  error = 0.0;
  aux = 0.0;
  for (const auto& s : heap) {
    value += s.value;
    error += s.error;
    aux += s.aux;
  }
  out.value = value;
  out.error_estimate = error + aux;
  out.converged = converged && out.error_estimate <= spec.tolerance_for(value);
  return out;
}

template <class V, class F>
QuadResult integrate_generic(F&& f, const Interval& domain, const QuadratureSpec& spec) {
  if (!domain.is_semi_infinite()) {
    if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi))
      throw ValidationError("domain", "lower bound must be finite");
    return adaptive<V>([&](double x) { return f(x); }, domain.lo, domain.hi, spec);
  }
  if (!std::isfinite(domain.lo)) throw ValidationError("domain", "lower bound must be finite");
  const double lo = domain.lo;
  const double c = domain.scale;
  if (spec.infinite_transform == InfiniteTransform::rational) {
    return adaptive<V>(
        [&](double t) -> V {
          const double om = 1.0 - t;
          if (!(om > 0.0)) return V{};
          const double x = lo + c * t / om;
          const double jac = c / (om * om);
          const V v = f(x);
          if constexpr (std::is_same_v<V, double>) {
            return v == 0.0 ? 0.0 : v * jac;
          } else {
            return V{v.value == 0.0 ? 0.0 : v.value * jac, v.error * jac};
          }
        },
        0.0, 1.0, spec);
  }
  return adaptive<V>(
      [&](double t) -> V {
        const double om = 1.0 - t;
        if (!(om > 0.0)) return V{};
        const double x = lo - c * std::log(om);
        const double jac = c / om;
        const V v = f(x);
        if constexpr (std::is_same_v<V, double>) {
          return v == 0.0 ? 0.0 : v * jac;
        } else {
          return V{v.value == 0.0 ? 0.0 : v.value * jac, v.error * jac};
        }
      },
      0.0, 1.0, spec);
}

}  // namespace detail

/// Integrates f over a finite or [lo, inf) interval. Never throws on missing the
/// tolerance; inspect `converged`. Throws DomainError on a non-finite sample.
template <class F>
QuadResult integrate_1d(F&& f, const Interval& domain, const QuadratureSpec& spec) {
  return detail::integrate_generic<double>(std::forward<F>(f), domain, spec);
}

/// Like integrate_1d, but the integrand returns an inner QuadResult whose error
/// estimate is integrated alongside and added to the reported error.
template <class F>
QuadResult integrate_1d_tracked(F&& f, const Interval& domain, const QuadratureSpec& spec) {
  bool inner_ok = true;
  long long inner_evals = 0;
  auto wrapped = [&](double x) {
    const QuadResult r = f(x);
    inner_ok = inner_ok && r.converged;
    inner_evals += r.evaluations;
    return detail::Tracked{r.value, r.error_estimate};
  };
  QuadResult out = detail::integrate_generic<detail::Tracked>(wrapped, domain, spec);
  out.converged = out.converged && inner_ok;
  out.evaluations += inner_evals;
  return out;
}

using NestedIntegrand = std::function<double(std::span<const double>)>;

/// Tensor-nested integration over 2 or 3 variables. `domains[0]` is the outermost
/// variable; the integrand sees coordinates in the same order. The innermost
/// integral is evaluated first, with tolerances tightened tenfold per level.
QuadResult integrate_nested(const NestedIntegrand& f, std::span<const Interval> domains,
                            const QuadratureSpec& spec);

struct ScalarMinimum {
  double x = 0.0;
  double fx = 0.0;
};

/// Golden-section search for a minimum of f on [a, b], assuming unimodality
/// within the bracket. Stops when the bracket is narrower than `tol`.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

/// Throws ConvergenceError unless `r` converged; returns its value otherwise.
double require_converged(const QuadResult& r, const char* integral);

}  // namespace hoskip
