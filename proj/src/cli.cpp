#include "levy/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levy/config.hpp"
#include "levy/errors.hpp"
#include "levy/simulate.hpp"

namespace levy {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "experiment config (JSON)");
  sub->add_option("--seed", flags.seed, "master seed (seeds.master)");
  sub->add_option("--out", flags.out, "report path (output.path)");
  sub->allow_extras();
}

nlohmann::json load_document(const CommonFlags& flags, const std::vector<std::string>& extras) {
  nlohmann::json doc = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw ConfigError("cannot read config file " + flags.config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(flags.config_path + " is not valid JSON: " + e.what());
    }
  }
  for (const std::string& extra : extras) {
    const auto eq = extra.find('=');
    if (extra.rfind("--", 0) != 0 || eq == std::string::npos) {
      throw ConfigError("unrecognized argument '" + extra + "' (config overrides use --key=value)");
    }
    apply_override(doc, extra.substr(2, eq - 2), extra.substr(eq + 1));
  }
  if (flags.seed) doc["seeds"]["master"] = *flags.seed;
  if (!flags.out.empty()) doc["output"]["path"] = flags.out;
  if (!flags.format.empty()) doc["output"]["format"] = flags.format;
  return doc;
}

void summarize(const ExperimentOutcome& outcome, const ExperimentConfig& cfg, std::ostream& err) {
  if (cfg.verbosity == 0) return;
  if (!outcome.report) {
    err << to_string(cfg.experiment) << ": " << outcome.message << '\n';
    return;
  }
  const TheoremReport& r = *outcome.report;
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    if (!c.pass) {
      ++failed;
      err << "  FAIL " << c.name << ": " << c.statistic << ' ' << to_string(c.relation)
          << ' ' << c.threshold << " does not hold\n";
    }
  }
  err << r.theorem << ": " << (failed == 0 ? "PASS" : "FAIL") << " (" << r.checks.size() - failed
      << '/' << r.checks.size() << " checks)\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaled compound Poisson processes and their Wiener limits", "levyinv"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<CLI::App*> experiments;
  for (const char* name : {"fclt", "asclt", "integral-asclt", "moment-audit", "cf-check"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_common(sub, flags);
    sub->add_option("--threads", flags.threads, "worker threads (default: all cores)");
    sub->add_option("--format", flags.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    experiments.push_back(sub);
  }
  double horizon = 0.0;
  CLI::App* exporter = app.add_subcommand("export-jumps", "sample one record and write it as CSV");
  add_common(exporter, flags);
  exporter->add_option("--horizon", horizon, "record horizon")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (exporter->parsed()) {
      nlohmann::json doc = load_document(flags, exporter->remaining());
      if (!doc.contains("experiment")) doc["experiment"] = "fclt";
      const ExperimentConfig cfg = parse_config(doc);
      const JumpRecord record =
          sample_jumps(cfg.model, horizon, derive_stream(cfg.master_seed, "export", 0));
      std::ostringstream csv;
      write_jump_record_csv(csv, record);
      if (cfg.output_path.empty()) {
        out << csv.str();
      } else {
        write_file_atomic(cfg.output_path, csv.str());
      }
      return kExitPass;
    }

    for (CLI::App* sub : experiments) {
      if (!sub->parsed()) continue;
      nlohmann::json doc = load_document(flags, sub->remaining());
      doc["experiment"] = sub->get_name();
      const ExperimentConfig cfg = parse_config(doc);
      const unsigned threads = flags.threads.value_or(default_threads());
      const ExperimentOutcome outcome = run_experiment(cfg, threads);
      if (cfg.output_path.empty()) out << outcome.rendered;
      summarize(outcome, cfg, err);
      return outcome.exit_status;
    }
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace levy
