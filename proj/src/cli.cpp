#include "hoskip/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "hoskip/datarate.hpp"
#include "hoskip/handover.hpp"
#include "hoskip/parallel.hpp"
#include "hoskip/validation.hpp"
#include "json.hpp"

namespace hoskip::cli {

using nlohmann::json;

ConfigParseError::ConfigParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{"lambda", "beta", "sigma2", "s", "cost",
                                              "epsilon", "mean", "v", "u", "l"};
  return names;
}

ScenarioConfig::ScenarioConfig()
    : params{{"lambda", 1.0}, {"beta", 4.0}, {"sigma2", 0.0}, {"s", 50.0}, {"cost", 0.0},
             {"epsilon", 0.0}, {"mean", 0.1},  {"v", 0.001},   {"u", 0.0},  {"l", 0.0}} {}

double ScenarioConfig::get(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end()) throw ValidationError(name, "unknown parameter");
  return it->second;
}

NetworkParams ScenarioConfig::net() const { return {get("lambda"), get("beta"), get("sigma2")}; }

SkippingPolicy ScenarioConfig::policy() const { return {get("s"), get("cost"), get("epsilon")}; }

SpeedLaw ScenarioConfig::speed_law() const {
  const double m = get("mean");
  if (law == "deterministic") return SpeedLaw::deterministic(m);
  if (law == "exponential") return SpeedLaw::exponential(m);
  if (law == "erlang") return SpeedLaw::erlang(erlang_k, m);
  if (law == "hyperexponential") return SpeedLaw::hyper_exponential_with_mean(m);
  throw ValidationError("law", "must be deterministic, exponential, erlang or hyperexponential");
}

RateMethod ScenarioConfig::method() const {
  if (rate_method == "exact") return RateMethod::exact();
  if (rate_method == "approx") return RateMethod::approx();
  if (rate_method == "refined") return RateMethod::refined(get("epsilon"));
  throw ValidationError("rate_method", "must be exact, approx or refined");
}

std::vector<double> parse_values(const std::string& text) {
  auto number = [&](const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(v))
      throw ValidationError("values", "cannot parse '" + token + "' in '" + text + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string token; std::getline(ss, token, sep);) parts.push_back(token);
  if (parts.empty()) throw ValidationError("values", "empty value list");
  if (sep == ',') {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(number(p));
    return out;
  }
  if (parts.size() != 3) throw ValidationError("values", "range must be start:step:stop, got '" + text + "'");
  const double start = number(parts[0]);
  const double step = number(parts[1]);
  const double stop = number(parts[2]);
  if (!(step > 0.0) || stop < start) throw ValidationError("values", "range needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("values", "range has too many points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  return out;
}

namespace {

bool is_parameter(const std::string& name) {
  const auto& names = parameter_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<double> values_from_json(const json& j, const std::string& field) {
  if (j.is_string()) return parse_values(j.get<std::string>());
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ValidationError(field, "values must be numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ValidationError(field, "value list must be nonempty");
    return out;
  }
  throw ValidationError(field, "expected a number, an array or a 'start:step:stop' string");
}

Sweep sweep_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "must be an object {axis: values}");
  if (j.size() != 1) throw ValidationError(field, "exactly one axis per run, got " + std::to_string(j.size()));
  const auto it = j.begin();
  if (!is_parameter(it.key())) throw ValidationError(field, "unknown axis '" + it.key() + "'");
  return {it.key(), values_from_json(it.value(), field)};
}

template <class T>
T typed(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(field, "wrong type");
  }
}

void read_mc(const json& j, ScenarioConfig& c) {
  if (!j.is_object()) throw ValidationError("mc", "must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "mc." + key;
    if (key == "enabled") c.mc = typed<bool>(value, field);
    else if (key == "replications") c.mc_config.replications = typed<std::uint64_t>(value, field);
    else if (key == "seed") c.mc_config.seed = typed<std::uint64_t>(value, field);
    else if (key == "window_radius_factor") c.mc_config.window_radius_factor = typed<double>(value, field);
    else if (key == "segment_step") c.mc_config.segment_step = typed<double>(value, field);
    else if (key == "tail_correction") c.mc_config.tail_correction = typed<bool>(value, field);
    else if (key == "threads") c.mc_config.threads = typed<unsigned>(value, field);
    else throw ValidationError(field, "unknown configuration key");
  }
}

void read_quadrature(const json& j, ScenarioConfig& c) {
  if (!j.is_object()) throw ValidationError("quadrature", "must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "quadrature." + key;
    if (key == "rel_tol") c.spec.rel_tol = typed<double>(value, field);
    else if (key == "abs_tol") c.spec.abs_tol = typed<double>(value, field);
    else if (key == "max_subdivisions") c.spec.max_subdivisions = typed<int>(value, field);
    else if (key == "exact_rel_tol") c.exact_rel_tol = typed<double>(value, field);
    else if (key == "transform") {
      const auto t = typed<std::string>(value, field);
      if (t == "rational") c.spec.infinite_transform = InfiniteTransform::rational;
      else if (t == "exponential") c.spec.infinite_transform = InfiniteTransform::exponential;
      else throw ValidationError(field, "must be rational or exponential");
    } else {
      throw ValidationError(field, "unknown configuration key");
    }
  }
}

void read_search(const json& j, ScenarioConfig& c) {
  if (!j.is_object()) throw ValidationError("search", "must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "search." + key;
    if (key == "s_min") c.search.s_min = typed<double>(value, field);
    else if (key == "s_max") c.search.s_max = typed<double>(value, field);
    else if (key == "grid_points") c.search.grid_points = typed<int>(value, field);
    else if (key == "refine_tol") c.search.refine_tol = typed<double>(value, field);
    else throw ValidationError(field, "unknown configuration key");
  }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(json_text, e.byte);
    throw ConfigParseError(e.what(), line, column);
  }
  if (!j.is_object()) throw ConfigParseError("top level must be an object", 1, 1);
  ScenarioConfig c;
  for (const auto& [key, value] : j.items()) {
    if (is_parameter(key)) c.params[key] = typed<double>(value, key);
    else if (key == "law") c.law = typed<std::string>(value, key);
    else if (key == "erlang_k") c.erlang_k = typed<int>(value, key);
    else if (key == "rate_method") c.rate_method = typed<std::string>(value, key);
    else if (key == "estimator") c.estimator = typed<std::string>(value, key);
    else if (key == "output") c.output = typed<std::string>(value, key);
    else if (key == "sweep") c.sweep = sweep_from_json(value, key);
    else if (key == "series") c.series = sweep_from_json(value, key);
    else if (key == "mc") read_mc(value, c);
    else if (key == "quadrature") read_quadrature(value, c);
    else if (key == "search") read_search(value, c);
    else throw ValidationError(key, "unknown configuration key");
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ScenarioConfig& c) {
  for (const auto& [name, value] : c.params)
    if (!is_parameter(name)) throw ValidationError(name, "unknown parameter");
  if (c.sweep && c.series && c.sweep->axis == c.series->axis)
    throw ValidationError("series", "must differ from the sweep axis");
  // Every combination of swept values must form valid parameters.
  auto check_at = [&](const std::string& name, double value) {
    ScenarioConfig probe = c;
    probe.params[name] = value;
    validate(probe.net());
    validate(probe.policy());
    if (!(probe.get("mean") > 0.0)) throw ValidationError("mean", "must be > 0");
    validate(probe.speed_law());
    if (!(probe.get("v") >= 0.0)) throw ValidationError("v", "must be >= 0");
    if (!(probe.get("u") >= 0.0)) throw ValidationError("u", "must be >= 0");
    if (!(probe.get("l") >= 0.0)) throw ValidationError("l", "must be >= 0");
  };
  check_at("lambda", c.get("lambda"));
  for (const auto* sw : {&c.sweep, &c.series})
    if (*sw)
      for (double v : (*sw)->values) check_at((*sw)->axis, v);
  (void)c.method();
  if (c.rate_method != "exact" && c.get("sigma2") != 0.0)
    throw ValidationError("rate_method", "approx and refined rates require sigma2 = 0");
  if (!(c.exact_rel_tol > 0.0)) throw ValidationError("exact_rel_tol", "must be > 0");
  validate(c.spec);
  validate(c.search);
  validate(c.mc_config);
  static const std::set<std::string> estimators{"xi2", "n1", "n2", "q2"};
  if (!estimators.count(c.estimator)) throw ValidationError("estimator", "must be xi2, n1, n2 or q2");
}

std::string to_json(const ScenarioConfig& c) {
  json j;
  for (const auto& [k, v] : c.params) j[k] = v;
  j["law"] = c.law;
  j["erlang_k"] = c.erlang_k;
  j["rate_method"] = c.rate_method;
  j["estimator"] = c.estimator;
  if (c.sweep) j["sweep"] = {{c.sweep->axis, c.sweep->values}};
  if (c.series) j["series"] = {{c.series->axis, c.series->values}};
  j["mc"] = {{"enabled", c.mc},
             {"replications", c.mc_config.replications},
             {"seed", c.mc_config.seed},
             {"window_radius_factor", c.mc_config.window_radius_factor},
             {"segment_step", c.mc_config.segment_step},
             {"tail_correction", c.mc_config.tail_correction}};
  j["quadrature"] = {{"rel_tol", c.spec.rel_tol},
                     {"abs_tol", c.spec.abs_tol},
                     {"max_subdivisions", c.spec.max_subdivisions},
                     {"exact_rel_tol", c.exact_rel_tol},
                     {"transform", c.spec.infinite_transform == InfiniteTransform::rational ? "rational" : "exponential"}};
  j["search"] = {{"s_min", c.search.s_min},
                 {"s_max", c.search.s_max},
                 {"grid_points", c.search.grid_points},
                 {"refine_tol", c.search.refine_tol}};
  if (!c.preset.empty()) j["preset"] = c.preset;
  if (!c.assumptions.empty()) j["assumptions"] = c.assumptions;
  return j.dump();
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Which parameters a command may sweep, the default sweep, and the allowed series.
struct CommandAxes {
  std::vector<std::string> axes;
  Sweep default_sweep;
  std::vector<std::string> series;
};

CommandAxes axes_for(const std::string& command, const ScenarioConfig& c) {
  if (command == "horate") return {{"l", "lambda"}, {"l", parse_values("0:0.05:1.5")}, {"lambda", "l"}};
  if (command == "datarate") return {{"u"}, {"u", parse_values("0:0.05:0.5")}, {"lambda", "beta", "sigma2", "epsilon"}};
  if (command == "evaluate")
    return {{"mean", "s"}, {"mean", parse_values("0.05:0.05:1.5")}, {"v", "cost", "lambda", "beta", "epsilon"}};
  if (command == "optimize")
    return {{"v", "lambda", "beta", "cost"}, {"v", parse_values("0.001:0.001:0.006")}, {"lambda", "beta", "cost", "v"}};
  if (command == "simulate") {
    if (c.estimator == "xi2") return {{"u"}, {"u", parse_values("0:0.1:0.4")}, {"lambda", "beta", "sigma2"}};
    if (c.estimator == "q2") return {{"mean"}, {"mean", parse_values("0.05:0.05:0.3")}, {"lambda", "beta", "cost", "s"}};
    return {{"l"}, {"l", parse_values("0.1:0.1:1")}, {"lambda"}};
  }
  return {{}, {}, {}};
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Decides the sweep axis and series from the config's lists plus list-valued flags.
void resolve_axes(const std::string& command, ScenarioConfig& c, const std::map<std::string, std::vector<double>>& lists,
                  const std::set<std::string>& scalar_flags) {
  const std::string hinted = c.sweep ? c.sweep->axis : std::string{};
  std::map<std::string, std::vector<double>> all;
  if (c.sweep) all[c.sweep->axis] = c.sweep->values;
  if (c.series) all[c.series->axis] = c.series->values;
  for (const auto& name : scalar_flags) {
    if (all.count(name)) all[name] = {c.get(name)};
  }
  for (const auto& [name, values] : lists) all[name] = values;
  c.sweep.reset();
  c.series.reset();
  if (command == "validate") return;
  const CommandAxes ax = axes_for(command, c);
  if (all.size() > 2) throw ValidationError("sweep", "at most one sweep axis and one series per run");

  std::string axis;
  if (!hinted.empty() && all.count(hinted)) axis = hinted;
  for (const auto& a : ax.axes)
    if (axis.empty() && all.count(a)) axis = a;
  if (axis.empty()) {
    for (const auto& a : ax.axes)
      if (axis.empty() && scalar_flags.count(a) && a != ax.default_sweep.axis && a != ax.axes.front()) axis = a;
    if (axis.empty()) axis = ax.default_sweep.axis;
    if (scalar_flags.count(axis)) all[axis] = {c.get(axis)};
    else all[axis] = ax.default_sweep.values;
  }
  if (!contains(ax.axes, axis)) throw ValidationError("sweep", "'" + axis + "' is not a sweep axis of " + command);
  c.sweep = Sweep{axis, all[axis]};
  all.erase(axis);
  if (!all.empty()) {
    const auto& [name, values] = *all.begin();
    if (!contains(ax.series, name) || name == axis)
      throw ValidationError("series", "'" + name + "' cannot be a series of " + command + " along " + axis);
    c.series = Sweep{name, values};
  }
}

// One evaluation point: the config with axis and series values applied.
struct Point {
  ScenarioConfig config;
  double axis_value;
  std::optional<double> series_value;
};

std::vector<Point> points_of(const ScenarioConfig& c) {
  std::vector<Point> out;
  const std::vector<double> series = c.series ? c.series->values : std::vector<double>{0.0};
  for (double sv : series) {
    for (double av : c.sweep->values) {
      Point p{c, av, std::nullopt};
      p.config.params[c.sweep->axis] = av;
      if (c.series) {
        p.config.params[c.series->axis] = sv;
        p.series_value = sv;
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

unsigned workers(const ScenarioConfig& c) { return resolve_threads(c.mc_config); }

Table horate_table(const ScenarioConfig& c, bool with_n1) {
  // Wide layout: one column group per series value.
  const std::string axis = c.sweep->axis;
  const std::string other = c.series ? c.series->axis : (axis == "l" ? "lambda" : "l");
  const std::vector<double> series = c.series ? c.series->values : std::vector<double>{c.get(other)};
  Table t;
  t.header.push_back(axis);
  if (with_n1)
    for (double s : series) t.header.push_back("n1_" + other + tag(s));
  for (double s : series) t.header.push_back("n2_" + other + tag(s));
  if (c.mc)
    for (double s : series)
      for (const char* col : {"n2_mc_", "n2_mc_ci99_low_", "n2_mc_ci99_high_"})
        t.header.push_back(col + other + tag(s));
  const std::size_t nx = c.sweep->values.size();
  const std::size_t ns = series.size();
  std::vector<double> n1(nx * ns), n2(nx * ns);
  std::vector<Estimate> mc(nx * ns);
  parallel_for(nx * ns, workers(c), [&](std::size_t k) {
    ScenarioConfig p = c;
    p.params[axis] = c.sweep->values[k % nx];
    p.params[other] = series[k / nx];
    const double l = p.get("l");
    const double lambda = p.get("lambda");
    n1[k] = expected_handovers_nonskip(l, lambda);
    n2[k] = handover_probability_skip(l, lambda, c.spec);
    if (c.mc) {
      McConfig mcc = c.mc_config;
      mcc.threads = 1;
      mc[k] = estimate_n2(l, lambda, mcc);
    }
  });
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<std::string> row{num(c.sweep->values[i])};
    if (with_n1)
      for (std::size_t s = 0; s < ns; ++s) row.push_back(num(n1[s * nx + i]));
    for (std::size_t s = 0; s < ns; ++s) row.push_back(num(n2[s * nx + i]));
    if (c.mc)
      for (std::size_t s = 0; s < ns; ++s) {
        const Estimate& e = mc[s * nx + i];
        row.push_back(num(e.mean));
        row.push_back(num(e.ci99_low));
        row.push_back(num(e.ci99_high));
      }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Long layout: the point's parameter columns followed by computed columns.
Table long_table(const ScenarioConfig& c, const std::vector<std::string>& param_cols,
                 const std::vector<std::string>& value_cols,
                 const std::function<std::vector<double>(const ScenarioConfig&)>& compute) {
  const std::vector<Point> pts = points_of(c);
  std::vector<std::vector<double>> values(pts.size());
  parallel_for(pts.size(), workers(c), [&](std::size_t i) {
    ScenarioConfig p = pts[i].config;
    p.mc_config.threads = 1;
    values[i] = compute(p);
  });
  Table t;
  t.header = param_cols;
  t.header.insert(t.header.end(), value_cols.begin(), value_cols.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> row;
    for (const auto& name : param_cols) row.push_back(num(pts[i].config.get(name)));
    for (double v : values[i]) row.push_back(num(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Table datarate_table(const ScenarioConfig& c, bool with_exact) {
  std::vector<std::string> cols{"tau1", "tau2", "tau2_approx", "tau2_refined"};
  if (c.mc) cols.insert(cols.end(), {"mc_mean", "mc_std_error", "mc_ci99_low", "mc_ci99_high"});
  return long_table(c, {"lambda", "beta", "sigma2", "epsilon", "u"}, cols, [&](const ScenarioConfig& p) {
    const NetworkParams net = p.net();
    const double u = p.get("u");
    const double t1 = tau1(net, p.spec);
    double t2 = kNaN;
    if (with_exact) {
      QuadratureSpec exact_spec = p.spec;
      exact_spec.rel_tol = std::max(p.spec.rel_tol, p.exact_rel_tol);
      t2 = tau2_exact({u, net, exact_spec});
    }
    double approx = kNaN;
    double refined = kNaN;
    if (net.interference_limited()) {
      approx = tau2_approx({u, net, p.spec});
      refined = refined_blend(u, p.get("epsilon"), t1, approx);
    }
    std::vector<double> row{t1, t2, approx, refined};
    if (p.mc) {
      const Estimate e = sample_xi2(u, net, p.mc_config);
      row.insert(row.end(), {e.mean, e.std_error, e.ci99_low, e.ci99_high});
    }
    return row;
  });
}

Table evaluate_table(const ScenarioConfig& c) {
  if (c.sweep->axis == "s") {
    std::vector<std::string> cols{"q_tilde", "q2"};
    if (c.mc) cols.insert(cols.end(), {"q2_mc", "q2_mc_ci99_low", "q2_mc_ci99_high"});
    return long_table(c, {"lambda", "beta", "cost", "epsilon", "v", "s"}, cols, [&](const ScenarioConfig& p) {
      const double s = p.get("s");
      const double v = p.get("v");
      std::vector<double> row{q_tilde(s, v, p.net(), p.get("cost"), p.spec), kNaN};
      EvaluationQuery q{p.policy(), p.net(), SpeedLaw::deterministic(s * v), p.method(), p.spec};
      const bool integral_s = std::abs(s - std::round(s)) < 1e-9 && s >= 1.0;
      const bool moving = s * v > 0.0;
      if (integral_s && moving) row[1] = q2(q);
      if (p.mc) {
        Estimate e{kNaN, kNaN, kNaN, kNaN, 0};
        if (integral_s && moving) e = estimate_q2(q.law, q.policy, q.net, p.mc_config);
        row.insert(row.end(), {e.mean, e.ci99_low, e.ci99_high});
      }
      return row;
    });
  }
  std::vector<std::string> cols{"speed", "q1", "q2_deterministic", "q2_erlang2", "q2_exponential",
                                "q2_hyperexponential"};
  return long_table(c, {"lambda", "beta", "cost", "epsilon", "s", "mean"}, cols, [&](const ScenarioConfig& p) {
    const double m = p.get("mean");
    const SpeedLaw laws[] = {SpeedLaw::deterministic(m), SpeedLaw::erlang(2, m), SpeedLaw::exponential(m),
                             SpeedLaw::hyper_exponential_with_mean(m)};
    EvaluationQuery q{p.policy(), p.net(), laws[0], p.method(), p.spec};
    std::vector<double> row{m / p.get("s"), q1(q)};
    for (const auto& law : laws) {
      q.law = law;
      row.push_back(q2(q));
    }
    return row;
  });
}

Table optimize_table(const ScenarioConfig& c) {
  return long_table(c, {"v", "lambda", "beta", "cost"},
                    {"s_star_numeric", "q_at_star", "interior", "boundary_best", "s_star_closed"},
                    [&](const ScenarioConfig& p) {
                      const OptResult r =
                          optimal_skipping_time_numeric(p.get("v"), p.net(), p.get("cost"), p.search, p.spec);
                      return std::vector<double>{r.s_star.value_or(kNaN), r.q_at_star.value_or(kNaN),
                                                 r.is_interior ? 1.0 : 0.0, r.boundary_best ? 1.0 : 0.0,
                                                 optimal_skipping_time_closed(p.get("beta"), p.get("cost"), p.spec)};
                    });
}

Table simulate_table(const ScenarioConfig& c) {
  const std::vector<std::string> cols{"mean_estimate", "std_error", "ci99_low", "ci99_high", "n"};
  std::vector<std::string> params;
  if (c.estimator == "xi2") params = {"lambda", "beta", "sigma2", "u"};
  else if (c.estimator == "q2") params = {"lambda", "beta", "sigma2", "s", "cost", "mean"};
  else params = {"lambda", "l"};
  return long_table(c, params, cols, [&](const ScenarioConfig& p) {
    Estimate e;
    if (p.estimator == "xi2") e = sample_xi2(p.get("u"), p.net(), p.mc_config);
    else if (p.estimator == "n1") e = estimate_n1(p.get("l"), p.get("lambda"), p.mc_config);
    else if (p.estimator == "n2") e = estimate_n2(p.get("l"), p.get("lambda"), p.mc_config);
    else e = estimate_q2(p.speed_law(), p.policy(), p.net(), p.mc_config);
    return std::vector<double>{e.mean, e.std_error, e.ci99_low, e.ci99_high, static_cast<double>(e.n)};
  });
}

void apply_preset(const std::string& name, ScenarioConfig& c) {
  auto set = [&](std::initializer_list<std::pair<const char*, double>> kv) {
    for (const auto& [k, v] : kv) c.params[k] = v;
  };
  c.preset = name;
  c.sweep.reset();
  c.series.reset();
  if (name == "fig4") {
    c.sweep = Sweep{"l", parse_values("0:0.05:1.5")};
    c.series = Sweep{"lambda", {1.0, 3.0, 5.0}};
  } else if (name == "fig5") {
    set({{"lambda", 3.0}, {"beta", 3.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"u", parse_values("0:0.05:0.5")};
    c.mc = true;
  } else if (name == "fig6") {
    set({{"lambda", 3.0}, {"beta", 3.0}, {"sigma2", 0.0}, {"epsilon", 5.0}});
    c.sweep = Sweep{"u", parse_values("0:0.05:0.5")};
    c.mc = true;
  } else if (name == "fig7") {
    set({{"s", 50.0}, {"lambda", 5.0}, {"beta", 4.0}, {"cost", 30.0}, {"sigma2", 0.0}, {"epsilon", 10.0}});
    c.rate_method = "refined";
    c.sweep = Sweep{"mean", parse_values("0.05:0.05:1.5")};
  } else if (name == "fig8") {
    set({{"lambda", 3.0}, {"beta", 3.0}, {"cost", 30.0}, {"sigma2", 0.0}, {"epsilon", 5.0}});
    c.rate_method = "refined";
    c.sweep = Sweep{"s", parse_values("1:1:40")};
    c.series = Sweep{"v", {0.002, 0.004, 0.006}};
    c.assumptions = "discrete q2 uses the refined rate with epsilon=5";
  } else if (name == "fig9") {
    set({{"beta", 4.0}, {"cost", 50.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"v", parse_values("0.0005:0.0005:0.006")};
    c.series = Sweep{"lambda", {1.0, 3.0, 5.0}};
    c.assumptions = "cost=50 for all curves";
  } else if (name == "fig10") {
    set({{"v", 0.001}, {"cost", 50.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"lambda", parse_values("0.5:0.5:6")};
    c.series = Sweep{"beta", {3.0, 4.0, 5.0}};
    c.assumptions = "v=0.001 for all curves";
  } else if (name == "fig11") {
    set({{"v", 0.001}, {"lambda", 5.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"beta", parse_values("2.5:0.25:6")};
    c.series = Sweep{"cost", {30.0, 50.0, 70.0}};
  } else if (name == "fig12") {
    set({{"v", 0.005}, {"lambda", 5.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"cost", parse_values("10:10:100")};
    c.series = Sweep{"beta", {3.0, 4.0, 5.0}};
  } else if (name == "fig13") {
    set({{"v", 0.005}, {"lambda", 5.0}, {"sigma2", 0.0}});
    c.sweep = Sweep{"beta", parse_values("2.5:0.25:6")};
    c.series = Sweep{"cost", {30.0, 50.0, 70.0}};
  } else {
    throw ValidationError("preset", "unknown preset '" + name + "'");
  }
}

void write_table(const Table& t, const std::string& command, const ScenarioConfig& c, std::ostream& out) {
  out << "# hoskip " << command << " seed=" << c.mc_config.seed << " config=" << to_json(c) << '\n';
  out << join(t.header) << '\n';
  for (const auto& row : t.rows) out << join(row) << '\n';
}

struct Flags {
  std::string config;
  std::map<std::string, std::string> numeric;
  std::string law, method, estimator, out, transform;
  int erlang_k = 0;
  bool mc = false, no_tail = false, with_n1 = false, no_exact = false;
  std::uint64_t replications = 0, seed = 0;
  unsigned threads = 0;
  double window = 0, step = 0, rel_tol = 0, abs_tol = 0, exact_rel_tol = 0, s_min = 0, s_max = 0, refine_tol = 0;
  int grid_points = 0, max_subdivisions = 0;
  std::string preset;
};

struct Registered {
  std::map<std::string, CLI::Option*> numeric;
  std::map<std::string, CLI::Option*> other;
};

Registered register_options(CLI::App* sub, Flags& f, const std::vector<std::string>& presets) {
  Registered r;
  sub->add_option("--config", f.config, "JSON scenario file; flags override its values");
  for (const auto& name : parameter_names())
    r.numeric[name] = sub->add_option("--" + name, f.numeric[name], "value, list a,b,c or range start:step:stop");
  r.other["law"] = sub->add_option("--law", f.law, "deterministic | exponential | erlang | hyperexponential");
  r.other["erlang-k"] = sub->add_option("--erlang-k", f.erlang_k, "Erlang shape");
  r.other["method"] = sub->add_option("--method", f.method, "exact | approx | refined");
  r.other["mc"] = sub->add_flag("--mc", f.mc, "add Monte Carlo columns");
  r.other["replications"] = sub->add_option("--replications", f.replications, "Monte Carlo replications");
  r.other["seed"] = sub->add_option("--seed", f.seed, "Monte Carlo seed");
  r.other["threads"] = sub->add_option("--threads", f.threads, "worker threads (default HOSKIP_THREADS)");
  r.other["window-factor"] = sub->add_option("--window-factor", f.window, "simulation window radius factor");
  r.other["segment-step"] = sub->add_option("--segment-step", f.step, "crossing-count step, km");
  r.other["no-tail-correction"] = sub->add_flag("--no-tail-correction", f.no_tail, "drop mean interference beyond the window");
  r.other["rel-tol"] = sub->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
  r.other["abs-tol"] = sub->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
  r.other["max-subdivisions"] = sub->add_option("--max-subdivisions", f.max_subdivisions, "quadrature subdivision limit");
  r.other["transform"] = sub->add_option("--transform", f.transform, "rational | exponential");
  r.other["exact-rel-tol"] = sub->add_option("--exact-rel-tol", f.exact_rel_tol, "tolerance for exact stale rates");
  r.other["s-min"] = sub->add_option("--s-min", f.s_min, "search lower bound, s");
  r.other["s-max"] = sub->add_option("--s-max", f.s_max, "search upper bound, s");
  r.other["grid-points"] = sub->add_option("--grid-points", f.grid_points, "search grid size");
  r.other["refine-tol"] = sub->add_option("--refine-tol", f.refine_tol, "golden-section tolerance, s");
  r.other["out"] = sub->add_option("--out", f.out, "output CSV path (default stdout)");
  for (const auto& p : presets) r.other[p] = sub->add_flag("--" + p, "figure preset");
  return r;
}

bool given(const Registered& r, const std::string& name) {
  auto it = r.other.find(name);
  return it != r.other.end() && it->second->count() > 0;
}

ScenarioConfig build_config(const std::string& command, const Flags& f, const Registered& r,
                            const std::vector<std::string>& presets) {
  ScenarioConfig c = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
  for (const auto& p : presets)
    if (given(r, p)) apply_preset(p, c);
  std::map<std::string, std::vector<double>> lists;
  std::set<std::string> scalars;
  for (const auto& [name, opt] : r.numeric) {
    if (opt->count() == 0) continue;
    const std::string& text = f.numeric.at(name);
    const std::vector<double> values = parse_values(text);
    const bool is_list = values.size() > 1 || text.find(':') != std::string::npos;
    if (is_list) {
      lists[name] = values;
    } else {
      c.params[name] = values.front();
      scalars.insert(name);
    }
  }
  if (!f.estimator.empty()) c.estimator = f.estimator;
  if (given(r, "law")) c.law = f.law;
  if (given(r, "erlang-k")) c.erlang_k = f.erlang_k;
  if (given(r, "method")) c.rate_method = f.method;
  if (given(r, "mc")) c.mc = true;
  if (given(r, "replications")) c.mc_config.replications = f.replications;
  if (given(r, "seed")) c.mc_config.seed = f.seed;
  if (given(r, "threads")) c.mc_config.threads = f.threads;
  if (given(r, "window-factor")) c.mc_config.window_radius_factor = f.window;
  if (given(r, "segment-step")) c.mc_config.segment_step = f.step;
  if (given(r, "no-tail-correction")) c.mc_config.tail_correction = false;
  if (given(r, "rel-tol")) c.spec.rel_tol = f.rel_tol;
  if (given(r, "abs-tol")) c.spec.abs_tol = f.abs_tol;
  if (given(r, "max-subdivisions")) c.spec.max_subdivisions = f.max_subdivisions;
  if (given(r, "transform")) {
    if (f.transform == "rational") c.spec.infinite_transform = InfiniteTransform::rational;
    else if (f.transform == "exponential") c.spec.infinite_transform = InfiniteTransform::exponential;
    else throw ValidationError("transform", "must be rational or exponential");
  }
  if (given(r, "exact-rel-tol")) c.exact_rel_tol = f.exact_rel_tol;
  if (given(r, "s-min")) c.search.s_min = f.s_min;
  if (given(r, "s-max")) c.search.s_max = f.s_max;
  if (given(r, "grid-points")) c.search.grid_points = f.grid_points;
  if (given(r, "refine-tol")) c.search.refine_tol = f.refine_tol;
  if (given(r, "out")) c.output = f.out;
  resolve_axes(command, c, lists, scalars);
  validate(c);
  return c;
}

int execute(const std::string& command, const ScenarioConfig& c, bool with_n1, bool with_exact, std::ostream& out,
            std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw ValidationError("output", "cannot write '" + c.output + "'");
    sink = &file;
  }
  if (command == "validate") {
    SuiteOptions opts{c.mc_config.seed, c.mc_config.threads};
    const std::vector<Check> checks = run_validation_suite(opts);
    Table t;
    t.header = {"criterion", "check", "observed", "lo", "hi", "pass"};
    int failed = 0;
    for (const auto& ch : checks) {
      t.rows.push_back({std::to_string(ch.criterion), ch.name, num(ch.observed), num(ch.lo), num(ch.hi),
                        ch.pass ? "1" : "0"});
      if (!ch.pass) {
        ++failed;
        err << "FAIL criterion " << ch.criterion << ": " << ch.name << " observed=" << num(ch.observed) << " range=["
            << num(ch.lo) << ", " << num(ch.hi) << "]\n";
      }
    }
    write_table(t, command, c, *sink);
    err << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed == 0 ? kOk : kValidationFailed;
  }
  Table t;
  if (command == "horate") t = horate_table(c, with_n1);
  else if (command == "datarate") t = datarate_table(c, with_exact);
  else if (command == "evaluate") t = evaluate_table(c);
  else if (command == "optimize") t = optimize_table(c);
  else t = simulate_table(c);
  write_table(t, command, c, *sink);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-based handover skipping in Poisson cellular networks", "hoskip"};
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
    std::vector<std::string> presets;
  };
  const std::vector<Command> commands{
      {"horate", "crossing count N1 and handover probability N2 vs l or lambda", {"fig4"}},
      {"datarate", "tau1, tau2, tau2', tau2'' vs u", {"fig5", "fig6"}},
      {"evaluate", "Q1 and Q2 vs mean displacement per law, or Q-tilde and Q2 vs s", {"fig7", "fig8"}},
      {"optimize", "numeric and closed-form optimal skipping time", {"fig9", "fig10", "fig11", "fig12", "fig13"}},
      {"simulate", "standalone Monte Carlo estimator with confidence interval", {}},
      {"validate", "analytic versus simulation cross-check suite", {}},
  };
  std::map<std::string, Flags> flags;
  std::map<std::string, Registered> registered;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    Flags& f = flags[cmd.name];
    registered[cmd.name] = register_options(sub, f, cmd.presets);
    if (std::string(cmd.name) == "horate") sub->add_flag("--n1", f.with_n1, "add crossing-count columns");
    if (std::string(cmd.name) == "datarate") sub->add_flag("--no-exact", f.no_exact, "skip the exact stale rate");
    if (std::string(cmd.name) == "simulate") sub->add_option("--estimator", f.estimator, "xi2 | n1 | n2 | q2");
    subs[cmd.name] = sub;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (const auto* sub : app.get_subcommands()) out << sub->help();
      return kOk;
    }
    err << "invalid arguments: " << e.what() << '\n';
    return kInvalidConfig;
  }
  try {
    for (const auto& cmd : commands) {
      if (!subs[cmd.name]->parsed()) continue;
      Flags& f = flags[cmd.name];
      const ScenarioConfig c = build_config(cmd.name, f, registered[cmd.name], cmd.presets);
      return execute(cmd.name, c, f.with_n1, !f.no_exact, out, err);
    }
  } catch (const ValidationError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ConfigParseError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.integral() << " error_estimate=" << e.error_estimate() << '\n';
    return kNonConvergence;
  } catch (const BudgetExceededError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DomainError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  }
  return kInvalidConfig;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hoskip::cli
