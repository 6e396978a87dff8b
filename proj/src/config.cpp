#include "levy/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "levy/errors.hpp"
#include "levy/theorems.hpp"

namespace levy {

namespace {

using nlohmann::json;
using Json = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ConfigError("config key '" + key + "': " + message);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  expect_object(j, path);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return item.key() == a; });
    if (!known) {
      std::string list;
      for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
      throw ConfigError("unknown config key '" + join(path, item.key()) +
                        "' (expected one of: " + list + ")");
    }
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  return j.get<double>();
}

std::uint64_t unsigned_int(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0)) {
    fail(key, "expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string string_value(const json& j, const std::string& key) {
  if (!j.is_string()) fail(key, "expected a string");
  return j.get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& key) {
  if (!j.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(join(path, key), "missing required key");
  return obj.at(key);
}

template <typename Fn>
auto wrap(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(key, e.what());
  }
}

JumpLaw parse_jump_law(const json& j, const std::string& path) {
  expect_object(j, path);
  const std::string kind = string_value(required(j, path, "kind"), join(path, "kind"));
  auto num = [&](const char* key) { return number(required(j, path, key), join(path, key)); };
  return wrap(path, [&] {
    if (kind == "degenerate") {
      check_keys(j, path, {"kind", "value"});
      return JumpLaw::degenerate(num("value"));
    }
    if (kind == "gaussian") {
      check_keys(j, path, {"kind", "mean", "sd"});
      return JumpLaw::gaussian(num("mean"), num("sd"));
    }
    if (kind == "exponential") {
      check_keys(j, path, {"kind", "rate"});
      return JumpLaw::exponential(num("rate"));
    }
    if (kind == "uniform") {
      check_keys(j, path, {"kind", "lo", "hi"});
      return JumpLaw::uniform(num("lo"), num("hi"));
    }
    fail(join(path, "kind"),
         "expected one of degenerate|gaussian|exponential|uniform, got '" + kind + "'");
  });
}

LevyModel parse_model(const json& j) {
  const std::string path = "model";
  check_keys(j, path, {"preset", "jump_law", "rate", "diffusion_sd"});
  std::optional<JumpLaw> law;
  if (j.contains("preset")) {
    if (j.contains("jump_law")) fail("model.preset", "conflicts with model.jump_law");
    const std::string preset = string_value(j.at("preset"), "model.preset");
    if (preset == "centered-poisson") {
      law = JumpLaw::degenerate(1.0);
    } else {
      fail("model.preset", "expected centered-poisson, got '" + preset + "'");
    }
  } else {
    law = parse_jump_law(required(j, path, "jump_law"), "model.jump_law");
  }
  const double rate = j.contains("rate") ? number(j.at("rate"), "model.rate") : 1.0;
  const double diffusion =
      j.contains("diffusion_sd") ? number(j.at("diffusion_sd"), "model.diffusion_sd") : 0.0;
  return wrap(path, [&] { return LevyModel(*law, rate, diffusion); });
}

Curve parse_xy_table(const json& j, const std::string& path) {
  const auto xs = number_array(required(j, path, "x"), join(path, "x"));
  const auto ys = number_array(required(j, path, "y"), join(path, "y"));
  return wrap(path, [&] { return Curve::table(xs, ys); });
}

ScheduleA parse_schedule(const json& j, std::size_t n_max) {
  const std::string path = "schedule";
  expect_object(j, path);
  const std::string kind = string_value(required(j, path, "kind"), "schedule.kind");
  if (kind == "power") {
    check_keys(j, path, {"kind", "coeff", "exponent", "beta"});
    ScheduleA s;
    s.s = Curve::power(j.contains("coeff") ? number(j.at("coeff"), "schedule.coeff") : 1.0,
                       j.contains("exponent") ? number(j.at("exponent"), "schedule.exponent")
                                              : 1.0);
    s.beta = j.contains("beta") ? number(j.at("beta"), "schedule.beta") : 1.0;
    s.n_max = n_max;
    return s;
  }
  if (kind == "table") {
    check_keys(j, path, {"kind", "values", "beta"});
    const auto values = number_array(required(j, path, "values"), "schedule.values");
    const double beta = j.contains("beta") ? number(j.at("beta"), "schedule.beta") : 1.0;
    return wrap(path, [&] { return ScheduleA::from_table(values, beta); });
  }
  fail("schedule.kind", "expected one of power|table, got '" + kind + "'");
}

WeightC parse_weight(const json& j) {
  const std::string path = "weight";
  expect_object(j, path);
  const std::string kind = string_value(required(j, path, "kind"), "weight.kind");
  if (kind == "reciprocal") {
    check_keys(j, path, {"kind", "c"});
    const double c = number(required(j, path, "c"), "weight.c");
    return wrap(path, [&] { return WeightC::reciprocal(c); });
  }
  if (kind == "power") {
    check_keys(j, path, {"kind", "coeff", "exponent"});
    return {Curve::power(number(required(j, path, "coeff"), "weight.coeff"),
                         number(required(j, path, "exponent"), "weight.exponent"))};
  }
  if (kind == "table") {
    check_keys(j, path, {"kind", "x", "y"});
    return {parse_xy_table(j, path)};
  }
  fail("weight.kind", "expected one of reciprocal|power|table, got '" + kind + "'");
}

TimeChangeB parse_time_change(const json& j) {
  const std::string path = "time_change";
  expect_object(j, path);
  const std::string kind = string_value(required(j, path, "kind"), "time_change.kind");
  TimeChangeB tc;
  if (kind == "power") {
    check_keys(j, path, {"kind", "coeff", "exponent", "beta"});
    tc.f = Curve::power(
        j.contains("coeff") ? number(j.at("coeff"), "time_change.coeff") : 1.0,
        j.contains("exponent") ? number(j.at("exponent"), "time_change.exponent") : 1.0);
  } else if (kind == "table") {
    check_keys(j, path, {"kind", "x", "y", "beta"});
    tc.f = parse_xy_table(j, path);
  } else {
    fail("time_change.kind", "expected one of power|table, got '" + kind + "'");
  }
  tc.beta = j.contains("beta") ? number(j.at("beta"), "time_change.beta") : 1.0;
  return tc;
}

PathFunctional parse_functional(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "endpoint") return PathFunctional::endpoint();
    if (name == "supremum") return PathFunctional::supremum();
    fail("functional", "expected endpoint|supremum|{\"value_at\": x}, got '" + name + "'");
  }
  check_keys(j, "functional", {"value_at"});
  const double x0 = number(required(j, "functional", "value_at"), "functional.value_at");
  return wrap("functional.value_at", [&] { return PathFunctional::value_at(x0); });
}

Json curve_json(const Curve& c, const char* table_x, const char* table_y) {
  Json j;
  switch (c.kind()) {
    case Curve::Kind::power:
      j["kind"] = "power";
      j["coeff"] = c.coeff();
      j["exponent"] = c.exponent();
      break;
    case Curve::Kind::table:
      j["kind"] = "table";
      if (table_x != nullptr) j[table_x] = c.xs();
      j[table_y] = c.ys();
      break;
    case Curve::Kind::custom:
      throw ConfigError("custom curve '" + c.label() + "' cannot be serialized");
  }
  return j;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::fclt: return "fclt";
    case ExperimentKind::asclt: return "asclt";
    case ExperimentKind::integral_asclt: return "integral-asclt";
    case ExperimentKind::moment_audit: return "moment-audit";
    case ExperimentKind::cf_check: return "cf-check";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto kind : {ExperimentKind::fclt, ExperimentKind::asclt,
                    ExperimentKind::integral_asclt, ExperimentKind::moment_audit,
                    ExperimentKind::cf_check}) {
    if (to_string(kind) == name) return kind;
  }
  fail("experiment",
       "expected one of fclt|asclt|integral-asclt|moment-audit|cf-check, got '" + name + "'");
}

double ExperimentConfig::effective_t() const {
  if (t) return *t;
  return experiment == ExperimentKind::cf_check ? 1.0 : 1e4;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "", {"experiment", "model", "schedule", "weight", "time_change", "t",
                       "xs", "n", "S", "dt", "m", "N", "u_grid", "pairs", "functional",
                       "seeds", "output", "limits"});
  ExperimentConfig cfg;
  cfg.experiment = experiment_kind_from_string(
      string_value(required(doc, "", "experiment"), "experiment"));
  cfg.model = parse_model(required(doc, "", "model"));

  if (doc.contains("n")) cfg.n = unsigned_int(doc.at("n"), "n");
  if (doc.contains("t")) cfg.t = number(doc.at("t"), "t");
  if (doc.contains("xs")) cfg.xs = number_array(doc.at("xs"), "xs");
  if (doc.contains("S")) cfg.S = number(doc.at("S"), "S");
  if (doc.contains("dt")) cfg.dt = number(doc.at("dt"), "dt");
  if (doc.contains("m")) cfg.m = unsigned_int(doc.at("m"), "m");
  if (doc.contains("N")) cfg.N = unsigned_int(doc.at("N"), "N");
  if (doc.contains("u_grid")) cfg.u_grid = number_array(doc.at("u_grid"), "u_grid");
  if (doc.contains("pairs")) {
    const json& pairs = doc.at("pairs");
    if (!pairs.is_array()) fail("pairs", "expected an array of [l, k] pairs");
    cfg.pairs.clear();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string key = "pairs[" + std::to_string(i) + "]";
      if (!pairs[i].is_array() || pairs[i].size() != 2) fail(key, "expected [l, k]");
      cfg.pairs.emplace_back(unsigned_int(pairs[i][0], key), unsigned_int(pairs[i][1], key));
    }
  }

  cfg.schedule.n_max = cfg.n;
  if (doc.contains("schedule")) cfg.schedule = parse_schedule(doc.at("schedule"), cfg.n);
  if (doc.contains("weight")) cfg.weight = parse_weight(doc.at("weight"));
  if (doc.contains("time_change")) cfg.time_change = parse_time_change(doc.at("time_change"));
  if (doc.contains("functional")) cfg.functional = parse_functional(doc.at("functional"));

  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    check_keys(s, "seeds", {"master", "panel"});
    if (s.contains("master")) cfg.master_seed = unsigned_int(s.at("master"), "seeds.master");
    if (s.contains("panel")) cfg.seed_panel = unsigned_int(s.at("panel"), "seeds.panel");
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"path", "format", "verbosity"});
    if (o.contains("path")) cfg.output_path = string_value(o.at("path"), "output.path");
    if (o.contains("format")) {
      const std::string f = string_value(o.at("format"), "output.format");
      if (f == "json") {
        cfg.format = ReportFormat::json;
      } else if (f == "csv") {
        cfg.format = ReportFormat::csv;
      } else {
        fail("output.format", "expected json|csv, got '" + f + "'");
      }
    }
    if (o.contains("verbosity")) {
      cfg.verbosity = static_cast<int>(unsigned_int(o.at("verbosity"), "output.verbosity"));
    }
  }
  if (doc.contains("limits")) {
    const json& l = doc.at("limits");
    check_keys(l, "limits", {"max_memory_mb"});
    if (l.contains("max_memory_mb")) {
      cfg.max_memory_mb = number(l.at("max_memory_mb"), "limits.max_memory_mb");
    }
  }

  if (cfg.m == 0) fail("m", "must be >= 1");
  if (cfg.N == 0) fail("N", "must be >= 1");
  if (cfg.seed_panel == 0) fail("seeds.panel", "must be >= 1");
  if (!(cfg.dt > 0.0)) fail("dt", "must be > 0");
  if (cfg.t && !(*cfg.t > 0.0)) fail("t", "must be > 0");
  if (!(cfg.max_memory_mb > 0.0)) fail("limits.max_memory_mb", "must be > 0");
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = to_string(c.experiment);

  Json law;
  const JumpLaw& jl = c.model.jump_law();
  law["kind"] = to_string(jl.kind());
  switch (jl.kind()) {
    case JumpLaw::Kind::degenerate: law["value"] = jl.p1(); break;
    case JumpLaw::Kind::gaussian: law["mean"] = jl.p1(); law["sd"] = jl.p2(); break;
    case JumpLaw::Kind::exponential: law["rate"] = jl.p1(); break;
    case JumpLaw::Kind::uniform: law["lo"] = jl.p1(); law["hi"] = jl.p2(); break;
  }
  j["model"] = {{"jump_law", law},
                {"rate", c.model.poisson_rate()},
                {"diffusion_sd", c.model.diffusion_sd()}};

  Json schedule = curve_json(c.schedule.s, nullptr, "values");
  schedule["beta"] = c.schedule.beta;
  j["schedule"] = schedule;
  j["weight"] = curve_json(c.weight.d, "x", "y");
  Json tc = curve_json(c.time_change.f, "x", "y");
  tc["beta"] = c.time_change.beta;
  j["time_change"] = tc;

  if (c.t) j["t"] = *c.t;
  j["xs"] = c.xs;
  j["n"] = c.n;
  j["S"] = c.S;
  j["dt"] = c.dt;
  j["m"] = c.m;
  j["N"] = c.N;
  j["u_grid"] = c.u_grid;
  auto pairs = Json::array();
  for (const auto& [l, k] : c.pairs) pairs.push_back({l, k});
  j["pairs"] = pairs;
  switch (c.functional.kind()) {
    case PathFunctional::Kind::endpoint: j["functional"] = "endpoint"; break;
    case PathFunctional::Kind::supremum: j["functional"] = "supremum"; break;
    case PathFunctional::Kind::value_at:
      j["functional"] = {{"value_at", c.functional.x0()}};
      break;
  }
  j["seeds"] = {{"master", c.master_seed}, {"panel", c.seed_panel}};
  j["output"] = {{"path", c.output_path},
                 {"format", c.format == ReportFormat::json ? "json" : "csv"},
                 {"verbosity", c.verbosity}};
  j["limits"] = {{"max_memory_mb", c.max_memory_mb}};
  return j;
}

void apply_override(nlohmann::json& doc, const std::string& dotted_key,
                    const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("empty override key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("malformed override key '" + dotted_key + "'");
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError("override '" + dotted_key + "' descends into a non-object");
      }
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, unsigned threads) {
  ExperimentOutcome outcome;
  RunContext ctx;
  ctx.master_seed = config.master_seed;
  ctx.threads = std::max(1u, threads);
  ctx.max_memory_mb = config.max_memory_mb;

  auto emit = [&](const std::string& text) {
    outcome.rendered = text;
    if (!config.output_path.empty()) write_file_atomic(config.output_path, text);
  };

  try {
    TheoremReport report;
    switch (config.experiment) {
      case ExperimentKind::fclt:
        report = run_fclt_test(config.model, config.effective_t(), config.xs, config.m,
                               config.N, ctx);
        break;
      case ExperimentKind::asclt: {
        ScheduleA schedule = config.schedule;
        schedule.n_max = config.n;
        report = run_asclt(config.model, schedule, config.n, config.functional, config.m,
                           ctx, {config.seed_panel});
        break;
      }
      case ExperimentKind::integral_asclt:
        report = run_integral_asclt(config.model, config.time_change, config.weight,
                                    config.S, config.dt, config.functional, config.m,
                                    ctx, {config.seed_panel});
        break;
      case ExperimentKind::moment_audit: {
        ScheduleA schedule = config.schedule;
        schedule.n_max = 0;
        for (const auto& p : config.pairs) schedule.n_max = std::max(schedule.n_max, p.second);
        report = audit_moment_bound(config.model, schedule, config.pairs, config.N,
                                    config.m, ctx);
        break;
      }
      case ExperimentKind::cf_check:
        report = run_cf_check(config.model, config.effective_t(), config.u_grid,
                              config.N, ctx);
        break;
    }
    Json echo;
    echo["effective"] = to_json(config);
    echo["harness"] = report.config;
    report.config = std::move(echo);
    outcome.exit_status = report.passed() ? kExitPass : kExitChecksFailed;
    emit(config.format == ReportFormat::json ? to_json(report).dump(2) + "\n"
                                             : to_csv(report));
    outcome.report = std::move(report);
  } catch (const ConditionRefusal& e) {
    outcome.exit_status = kExitRefused;
    outcome.message = e.what();
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["theorem"] = to_string(config.experiment);
    j["refused"] = true;
    j["reason"] = e.what();
    j["condition_report"] = Json::parse(e.report_json());
    emit(j.dump(2) + "\n");
  } catch (const InfeasibleRequest& e) {
    outcome.exit_status = kExitInfeasible;
    outcome.message = e.what();
  } catch (const std::invalid_argument& e) {
    outcome.exit_status = kExitConfigError;
    outcome.message = e.what();
  } catch (const std::domain_error& e) {
    outcome.exit_status = kExitConfigError;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace levy
