#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levy/conditions.hpp"
#include "levy/measures.hpp"
#include "levy/model.hpp"
#include "levy/report.hpp"

namespace levy {

enum class ExperimentKind { fclt, asclt, integral_asclt, moment_audit, cf_check };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError for an unknown name.
ExperimentKind experiment_kind_from_string(const std::string& name);

enum class ReportFormat { json, csv };

/// Effective experiment description. Every field has a default except the
/// experiment kind and the model, which a config must name.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::fclt;
  LevyModel model = LevyModel::centered_poisson();

  ScheduleA schedule = canonical_schedule(10000);
  WeightC weight = canonical_weight();
  TimeChangeB time_change = canonical_time_change();

  std::optional<double> t;  // fclt: 1e4, cf-check: 1 when unset
  std::vector<double> xs{0.25, 0.5, 0.75, 1.0};
  std::size_t n = 10000;
  double S = 1e4;
  double dt = 0.1;
  std::size_t m = 1000;
  std::size_t N = 2000;
  std::vector<double> u_grid{-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0,
                             0.5,  1.0,  1.5,  2.0,  2.5,  3.0};
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 10}, {2, 20}, {5, 50}};
  PathFunctional functional = PathFunctional::endpoint();

  std::uint64_t master_seed = 1;
  std::size_t seed_panel = 20;

  std::string output_path;  // empty: standard output
  ReportFormat format = ReportFormat::json;
  int verbosity = 1;

  double max_memory_mb = 4096.0;

  double effective_t() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parse: unknown keys and type mismatches throw ConfigError naming
/// the offending key and the expected type.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config(const std::string& text);

/// Full config with every default spelled out; parse_config accepts it.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

/// Sets `dotted.key` in `doc` to `value`, read as JSON when it parses and as
/// a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& dotted_key,
                    const std::string& value);

/// Process exit statuses of run_experiment and the CLI.
enum ExitStatus : int {
  kExitPass = 0,
  kExitConfigError = 1,
  kExitRefused = 2,
  kExitInfeasible = 3,
  kExitChecksFailed = 4,
};

struct ExperimentOutcome {
  int exit_status = kExitPass;
  std::optional<TheoremReport> report;
  std::string rendered;  // JSON or CSV text that was emitted
  std::string message;
};

/// Dispatches to the harness for `config.experiment`, renders the report in
/// the configured format and writes it atomically when an output path is
/// set. Harness refusals and infeasible requests map to their exit status.
ExperimentOutcome run_experiment(const ExperimentConfig& config, unsigned threads);

}  // namespace levy
