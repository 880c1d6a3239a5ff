#pragma once

// Analytic-versus-simulation cross-checks and the quadrature/RNG contract
// suite, grouped by acceptance criterion.

#include <cstdint>
#include <string>
#include <vector>

namespace hoskip {

struct Check {
  int criterion = 0;
  std::string name;
  double observed = 0.0;  // analytic value, or the statistic under test
  double lo = 0.0;        // accepted range for `observed`
  double hi = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: HOSKIP_THREADS, else hardware concurrency
};

/// Expected crossing count against the segment-walk estimator (10^5 replications).
std::vector<Check> check_crossings(const SuiteOptions& opts);
/// Handover probability against the endpoint estimator, plus the l = 0 and l = 5 limits.
std::vector<Check> check_handover_probability(const SuiteOptions& opts);

/// Exact stale rates on the offset grid, shared by the rate checks.
struct RateTable {
  struct Row {
    double lambda;
    double beta;
    double u;
    double tau2;
  };
  std::vector<Row> rows;
  std::vector<double> tau1;  // per (lambda, beta) pair, same order as kRatePairs
};

RateTable compute_rate_table(const SuiteOptions& opts);
std::vector<Check> check_stale_rates(const RateTable& table, const SuiteOptions& opts);
std::vector<Check> check_rate_identity(const RateTable& table);
std::vector<Check> check_refinement(const SuiteOptions& opts);
std::vector<Check> check_contracts(const SuiteOptions& opts);

/// Criteria 1-5 and 9 in order.
std::vector<Check> run_validation_suite(const SuiteOptions& opts);

}  // namespace hoskip
