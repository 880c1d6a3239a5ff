#include "hoskip/validation.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hoskip/datarate.hpp"
#include "hoskip/handover.hpp"
#include "hoskip/montecarlo.hpp"
#include "hoskip/numerics.hpp"
#include "hoskip/parallel.hpp"

namespace hoskip {

using std::numbers::pi;

namespace {

struct RatePair {
  double lambda;
  double beta;
};
constexpr std::array<RatePair, 3> kRatePairs{{{1.0, 4.0}, {5.0, 4.0}, {3.0, 3.0}}};
constexpr std::array<double, 5> kRateOffsets{0.0, 0.1, 0.2, 0.3, 0.4};

std::string label(const char* what, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << what;
  for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
  return os.str();
}

Check inside(int criterion, std::string name, double value, const Estimate& e) {
  return {criterion, std::move(name), value, e.ci99_low, e.ci99_high, e.contains(value)};
}

Check within(int criterion, std::string name, double value, double lo, double hi) {
  return {criterion, std::move(name), value, lo, hi, value >= lo && value <= hi};
}

McConfig mc_with(std::uint64_t replications, const SuiteOptions& opts) {
  McConfig mc;
  mc.replications = replications;
  mc.seed = opts.seed;
  mc.threads = opts.threads;
  return mc;
}

unsigned workers(const SuiteOptions& opts) {
  McConfig mc;
  mc.threads = opts.threads;
  return resolve_threads(mc);
}

}  // namespace

std::vector<Check> check_crossings(const SuiteOptions& opts) {
  std::vector<Check> out;
  const McConfig mc = mc_with(100000, opts);
  for (double l : {0.1, 0.3, 0.6})
    for (double lambda : {1.0, 3.0, 5.0})
      out.push_back(inside(1, label("n1", {{"l", l}, {"lambda", lambda}}), expected_handovers_nonskip(l, lambda),
                           estimate_n1(l, lambda, mc)));
  return out;
}

std::vector<Check> check_handover_probability(const SuiteOptions& opts) {
  std::vector<Check> out;
  const McConfig mc = mc_with(100000, opts);
  for (double lambda : {1.0, 3.0, 5.0}) {
    for (int i = 1; i <= 10; ++i) {
      const double l = 0.15 * i;
      const Estimate e = estimate_n2(l, lambda, mc);
      out.push_back(inside(2, label("n2", {{"l", l}, {"lambda", lambda}}), handover_probability_skip(l, lambda),
                           wilson_interval99(e.mean, e.n)));
    }
  }
  out.push_back(within(2, "n2 l=0 lambda=3", handover_probability_skip(0.0, 3.0), -1e-6, 1e-6));
  out.push_back(within(2, "n2 l=5 lambda=3", handover_probability_skip(5.0, 3.0), 0.999, 1.0));
  return out;
}

RateTable compute_rate_table(const SuiteOptions& opts) {
  RateTable table;
  for (const auto& p : kRatePairs)
    for (double u : kRateOffsets) table.rows.push_back({p.lambda, p.beta, u, 0.0});
  table.tau1.resize(kRatePairs.size());
  const QuadratureSpec spec = sweep_accuracy();
  parallel_for(table.rows.size() + kRatePairs.size(), workers(opts), [&](std::size_t i) {
    if (i < table.rows.size()) {
      auto& row = table.rows[i];
      row.tau2 = tau2_exact({row.u, {row.lambda, row.beta, 0.0}, spec});
    } else {
      const auto& p = kRatePairs[i - table.rows.size()];
      table.tau1[i - table.rows.size()] = tau1({p.lambda, p.beta, 0.0});
    }
  });
  return table;
}

std::vector<Check> check_stale_rates(const RateTable& table, const SuiteOptions& opts) {
  std::vector<Check> out;
  const McConfig mc = mc_with(10000, opts);
  for (const auto& row : table.rows)
    out.push_back(inside(3, label("tau2", {{"lambda", row.lambda}, {"beta", row.beta}, {"u", row.u}}), row.tau2,
                         sample_xi2(row.u, {row.lambda, row.beta, 0.0}, mc)));
  return out;
}

std::vector<Check> check_rate_identity(const RateTable& table) {
  std::vector<Check> out;
  for (std::size_t p = 0; p < kRatePairs.size(); ++p) {
    for (const auto& row : table.rows) {
      if (row.u != 0.0 || row.lambda != kRatePairs[p].lambda || row.beta != kRatePairs[p].beta) continue;
      const double rel = std::abs(row.tau2 - table.tau1[p]) / table.tau1[p];
      out.push_back(within(4, label("tau2(0)/tau1-1", {{"lambda", row.lambda}, {"beta", row.beta}}), rel, 0.0, 1e-3));
    }
  }
  return out;
}

std::vector<Check> check_refinement(const SuiteOptions& opts) {
  const NetworkParams net{3.0, 3.0, 0.0};
  const double epsilon = 5.0;
  const QuadratureSpec spec = sweep_accuracy();
  std::vector<double> u(11);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.05 * static_cast<double>(i);
  std::vector<double> exact(u.size());
  parallel_for(u.size(), workers(opts), [&](std::size_t i) { exact[i] = tau2_exact({u[i], net, spec}); });
  const double t1 = tau1(net);
  double ss_refined = 0.0;
  double ss_approx = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double approx = tau2_approx({u[i], net, {}});
    const double refined = refined_blend(u[i], epsilon, t1, approx);
    ss_refined += (refined - exact[i]) * (refined - exact[i]);
    ss_approx += (approx - exact[i]) * (approx - exact[i]);
  }
  const double n = static_cast<double>(u.size());
  const double rms_refined = std::sqrt(ss_refined / n);
  const double rms_approx = std::sqrt(ss_approx / n);
  return {{5, "rms refined vs approx lambda=3 beta=3 eps=5", rms_refined, 0.0, rms_approx, rms_refined < rms_approx}};
}

std::vector<Check> check_contracts(const SuiteOptions& opts) {
  std::vector<Check> out;
  const QuadratureSpec spec;
  const Interval half_line = Interval::semi_infinite(0.0);

  {
    auto f = [](double x) { return std::exp(-x); };
    auto g = [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };
    const double a = 2.0;
    const double b = -3.0;
    const QuadResult rf = integrate_1d(f, half_line, spec);
    const QuadResult rg = integrate_1d(g, half_line, spec);
    const QuadResult rc = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, half_line, spec);
    const double diff = rc.value - (a * rf.value + b * rg.value);
    const double tol = rc.error_estimate + std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate +
                       spec.tolerance_for(rc.value);
    out.push_back(within(9, "quadrature linearity", diff, -tol, tol));
  }
  for (double c : {0.7, 3.0}) {
    auto f = [](double x) { return x * std::exp(-x); };
    const QuadResult whole = integrate_1d(f, half_line, spec);
    const QuadResult left = integrate_1d(f, Interval::finite(0.0, c), spec);
    const QuadResult right = integrate_1d(f, Interval::semi_infinite(c), spec);
    const double diff = whole.value - left.value - right.value;
    const double tol = whole.error_estimate + left.error_estimate + right.error_estimate + spec.tolerance_for(1.0);
    out.push_back(within(9, label("quadrature split additivity", {{"c", c}}), diff, -tol, tol));
  }
  {
    auto f = [](double t) { return 1.0 / (std::sqrt(t) * (1.0 + t)); };
    QuadratureSpec loose;
    loose.rel_tol = 1e-6;
    const QuadResult a = integrate_1d(f, half_line, loose);
    const QuadResult b = integrate_1d(f, half_line, loose.tightened(10.0));
    out.push_back(within(9, "quadrature tightening stability", b.value - a.value, -a.error_estimate, a.error_estimate));
  }

  {
    const double lambda = 3.0;
    const double radius = 5.0;
    const McConfig mc = mc_with(10000, opts);
    const Estimate count = run_replications(mc, [&](std::uint64_t rep) {
      ReplicationRng rng(mc.seed, rep);
      return static_cast<double>(sample_ppp(lambda, radius, rng).points.size());
    });
    const double expected = lambda * pi * radius * radius;
    out.push_back(within(9, "ppp mean count lambda=3 r=5", count.mean, expected - 3.0 * count.std_error,
                         expected + 3.0 * count.std_error));
  }
  {
    const McConfig mc = mc_with(100000, opts);
    const Estimate empty = run_replications(mc, [&](std::uint64_t rep) {
      ReplicationRng rng(mc.seed, rep);
      return sample_ppp(1.0, 1.0, rng).points.empty() ? 1.0 : 0.0;
    });
    const double expected = std::exp(-pi);
    out.push_back(within(9, "ppp void probability lambda=1 r=1", empty.mean, expected - 3.0 * empty.std_error,
                         expected + 3.0 * empty.std_error));
  }
  {
    ReplicationRng r1(opts.seed, 7);
    ReplicationRng r2(opts.seed, 7);
    const Deployment d1 = sample_ppp(3.0, 2.0, r1);
    const Deployment d2 = sample_ppp(3.0, 2.0, r2);
    bool same = d1.points.size() == d2.points.size();
    for (std::size_t i = 0; same && i < d1.points.size(); ++i)
      same = d1.points[i].x == d2.points[i].x && d1.points[i].y == d2.points[i].y;
    out.push_back(within(9, "same seed same deployment", same ? 1.0 : 0.0, 1.0, 1.0));

    McConfig serial = mc_with(5000, opts);
    serial.threads = 1;
    McConfig pooled = serial;
    pooled.threads = 4;
    const Estimate a = estimate_n2(0.5, 3.0, serial);
    const Estimate b = estimate_n2(0.5, 3.0, pooled);
    const bool identical = a.mean == b.mean && a.std_error == b.std_error;
    out.push_back(within(9, "estimate independent of worker count", identical ? 1.0 : 0.0, 1.0, 1.0));
  }
  {
    const Estimate small = estimate_n2(0.5, 3.0, mc_with(10000, opts));
    const Estimate large = estimate_n2(0.5, 3.0, mc_with(40000, opts));
    out.push_back(within(9, "std error ratio at 4x replications", large.std_error / small.std_error, 0.4, 0.6));
  }
  return out;
}

std::vector<Check> run_validation_suite(const SuiteOptions& opts) {
  std::vector<Check> out;
  auto append = [&](std::vector<Check> part) { out.insert(out.end(), part.begin(), part.end()); };
  append(check_crossings(opts));
  append(check_handover_probability(opts));
  const RateTable table = compute_rate_table(opts);
  append(check_stale_rates(table, opts));
  append(check_rate_identity(table));
  append(check_refinement(opts));
  append(check_contracts(opts));
  return out;
}

}  // namespace hoskip
