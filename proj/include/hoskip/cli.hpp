#pragma once

// Batch front-end: scenario configuration, parameter sweeps and CSV output.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoskip/evaluation.hpp"
#include "hoskip/model.hpp"
#include "hoskip/montecarlo.hpp"
#include "hoskip/numerics.hpp"
#include "hoskip/optimizer.hpp"

namespace hoskip::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 1, kNonConvergence = 2, kValidationFailed = 3 };

/// Malformed configuration text; carries the 1-based line and column.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A named parameter and the values it takes.
struct Sweep {
  std::string axis;
  std::vector<double> values;
};

/// Names accepted for scalar parameters, sweep axes and series.
const std::vector<std::string>& parameter_names();

struct ScenarioConfig {
  /// Scalar parameters keyed by parameter_names(): lambda, beta, sigma2, s, cost,
  /// epsilon, mean (km per period), v (km/s), u (km), l (km).
  std::map<std::string, double> params;
  std::string law = "deterministic";  // deterministic | exponential | erlang | hyperexponential
  int erlang_k = 2;
  std::optional<Sweep> sweep;   // the single sweep axis
  std::optional<Sweep> series;  // optional second parameter, one curve per value
  std::string rate_method = "refined";  // exact | approx | refined
  double exact_rel_tol = 1e-4;          // tolerance used for exact stale rates
  bool mc = false;
  McConfig mc_config;
  QuadratureSpec spec;
  SearchConfig search;
  std::string estimator = "xi2";  // simulate: xi2 | n1 | n2 | q2
  std::string output;             // empty: standard output
  std::string preset;
  std::string assumptions;

  ScenarioConfig();
  double get(const std::string& name) const;
  NetworkParams net() const;
  SkippingPolicy policy() const;
  SpeedLaw speed_law() const;
  RateMethod method() const;
};

/// "a:step:b" (inclusive) or "a,b,c".
std::vector<double> parse_values(const std::string& text);

/// Parses JSON configuration text; unspecified fields keep their defaults.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

/// Throws ValidationError naming the field of the first broken invariant.
void validate(const ScenarioConfig& config);

/// The configuration as compact JSON with sorted keys.
std::string to_json(const ScenarioConfig& config);

/// Runs one command line; writes CSV to the configured output and messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hoskip::cli
