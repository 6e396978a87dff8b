#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "levy/cli.hpp"
#include "levy/config.hpp"
#include "levy/errors.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string strip_clock(const std::string& report_json) {
  auto j = nlohmann::ordered_json::parse(report_json);
  j.erase("wall_clock_seconds");
  return j.dump();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("levy_cfg_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// fast enough for a unit test: 100 paths on a short horizon
const std::vector<std::string> kSmallFclt{"--t=50", "--N=100", "--m=20", "--xs=[0.5,1]"};

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const auto cfg = parse_config(
      std::string(R"({"experiment": "fclt", "model": {"preset": "centered-poisson"}})"));
  CHECK(cfg.experiment == ExperimentKind::fclt);
  CHECK(sigma_v_squared(cfg.model) == 1.0);
  CHECK(cfg.effective_t() == 1e4);
  CHECK(cfg.N == 2000);
  CHECK(cfg.m == 1000);
  CHECK(cfg.master_seed == 1);
  CHECK(cfg.seed_panel == 20);
  CHECK(cfg.schedule == canonical_schedule(10000));
  CHECK(cfg.weight == canonical_weight());
  CHECK(cfg.time_change == canonical_time_change());

  const auto cf = parse_config(
      std::string(R"({"experiment": "cf-check", "model": {"preset": "centered-poisson"}})"));
  CHECK(cf.effective_t() == 1.0);
}

TEST_CASE("strict parsing names the offending key") {
  try {
    parse_config(std::string(R"({"experiment": "fclt", "modle": {}})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'modle'") != std::string::npos);
    CHECK(msg.find("model") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(std::string(R"({"model": {"preset": "centered-poisson"}})")),
                  ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(std::string(
          R"({"experiment": "fclt", "model": {"preset": "centered-poisson"}, "N": "many"})")),
      doctest::Contains("'N'"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(R"({"experiment": "fclt",
      "model": {"jump_law": {"kind": "gaussian", "mean": 0, "sd": 0}}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string("{not json")), ConfigError);
  // a weight block placed under `schedule`
  CHECK_THROWS_AS(parse_config(std::string(R"({"experiment": "asclt",
      "model": {"preset": "centered-poisson"}, "schedule": {"kind": "reciprocal", "c": 0.5}})")),
                  ConfigError);
}

TEST_CASE("config round trip") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* experiments[] = {"fclt", "asclt", "integral-asclt", "moment-audit", "cf-check"};
  for (int trial = 0; trial < 200; ++trial) {
    nlohmann::json doc;
    doc["experiment"] = experiments[rng() % 5];
    switch (rng() % 5) {
      case 0: doc["model"] = {{"preset", "centered-poisson"}}; break;
      case 1:
        doc["model"] = {{"jump_law", {{"kind", "gaussian"}, {"mean", unit(rng)}, {"sd", unit(rng)}}},
                        {"rate", 0.1 + unit(rng)}};
        break;
      case 2:
        doc["model"] = {{"jump_law", {{"kind", "exponential"}, {"rate", 0.5 + unit(rng)}}},
                        {"diffusion_sd", unit(rng)}};
        break;
      case 3:
        doc["model"] = {{"jump_law", {{"kind", "uniform"}, {"lo", -unit(rng)}, {"hi", 1.0}}}};
        break;
      default:
        doc["model"] = {{"jump_law", {{"kind", "degenerate"}, {"value", 0.5 + unit(rng)}}}};
    }
    if (rng() % 2) doc["t"] = 1.0 + 100.0 * unit(rng);
    if (rng() % 2) doc["schedule"] = {{"kind", "power"}, {"exponent", 1.0 + unit(rng)}, {"beta", 1.0}};
    if (rng() % 3 == 0) doc["schedule"] = {{"kind", "table"}, {"values", {1.0, 2.0, 4.0, 9.0}}};
    if (rng() % 2) doc["weight"] = {{"kind", "reciprocal"}, {"c", 0.1 + unit(rng)}};
    if (rng() % 3 == 0) doc["weight"] = {{"kind", "table"}, {"x", {1.0, 5.0}}, {"y", {0.5, 0.1}}};
    if (rng() % 2) doc["time_change"] = {{"kind", "power"}, {"coeff", 2.0}, {"beta", 0.5}};
    if (rng() % 2) doc["functional"] = {{"value_at", unit(rng)}};
    if (rng() % 2) doc["functional"] = "supremum";
    if (rng() % 2) doc["pairs"] = {{1, 3}, {2, 7}};
    doc["seeds"] = {{"master", rng() >> 1}, {"panel", 1 + rng() % 30}};
    if (rng() % 2) doc["output"] = {{"format", "csv"}, {"path", "r.csv"}, {"verbosity", 0}};

    const ExperimentConfig cfg = parse_config(doc);
    const auto again = parse_config(nlohmann::json::parse(to_json(cfg).dump()));
    CHECK(again == cfg);
    CHECK(to_json(again).dump() == to_json(cfg).dump());
  }
}

TEST_CASE("dotted overrides") {
  nlohmann::json doc = nlohmann::json::object();
  apply_override(doc, "seeds.master", "42");
  apply_override(doc, "model.preset", "centered-poisson");
  apply_override(doc, "xs", "[0.5, 1]");
  CHECK(doc["seeds"]["master"] == 42);
  CHECK(doc["model"]["preset"] == "centered-poisson");
  CHECK(doc["xs"].size() == 2);
  CHECK_THROWS_AS(apply_override(doc, "xs.a", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "a..b", "1"), ConfigError);
}

TEST_CASE("cli: config errors exit 1") {
  const fs::path dir = scratch_dir();
  write_text(dir / "bad.json", R"({"modle": {}})");
  auto r = cli({"fclt", "--config", (dir / "bad.json").string()});
  CHECK(r.status == kExitConfigError);
  CHECK(r.err.find("'modle'") != std::string::npos);

  r = cli({"asclt", "--model.preset=centered-poisson", "--schedule.kind=reciprocal"});
  CHECK(r.status == kExitConfigError);
  CHECK(cli({"no-such-command"}).status == kExitConfigError);
  CHECK(cli({"fclt", "positional"}).status == kExitConfigError);
  fs::remove_all(dir);
}

TEST_CASE("cli: flags override the config file and runs are reproducible") {
  const fs::path dir = scratch_dir();
  write_text(dir / "c.json",
             R"({"model": {"preset": "centered-poisson"}, "seeds": {"master": 5}})");
  std::vector<std::string> base{"fclt", "--config", (dir / "c.json").string()};
  base.insert(base.end(), kSmallFclt.begin(), kSmallFclt.end());

  auto a = cli(base);
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "9"});
  auto b = cli(with_seed);
  REQUIRE(a.status != kExitConfigError);
  REQUIRE(b.status != kExitConfigError);
  const auto ja = nlohmann::json::parse(a.out);
  const auto jb = nlohmann::json::parse(b.out);
  CHECK(ja["config"]["effective"]["seeds"]["master"] == 5);
  CHECK(jb["config"]["effective"]["seeds"]["master"] == 9);

  auto again = cli(base);
  CHECK(strip_clock(again.out) == strip_clock(a.out));
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(strip_clock(cli(threaded).out) == strip_clock(a.out));
  CHECK(a.err.find("fclt: ") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli: csv output written atomically") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "report.csv";
  std::vector<std::string> args{"fclt", "--model.preset=centered-poisson", "--format", "csv",
                                "--out", out.string()};
  args.insert(args.end(), kSmallFclt.begin(), kSmallFclt.end());
  const auto r = cli(args);
  CHECK((r.status == kExitPass || r.status == kExitChecksFailed));
  CHECK(r.out.empty());
  const std::string csv = read_text(out);
  CHECK(csv.rfind("check,statistic,threshold,relation,verdict\n", 0) == 0);
  CHECK(csv.find("ks_endpoint,") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "report.csv.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("cli: refusal and infeasibility exit codes") {
  auto refused = cli({"integral-asclt", "--model.preset=centered-poisson", "--weight.kind=power",
                      "--weight.coeff=1", "--weight.exponent=-1", "--S=100"});
  CHECK(refused.status == kExitRefused);
  const auto j = nlohmann::json::parse(refused.out);
  CHECK(j["refused"] == true);
  CHECK(j["condition_report"]["condition_c"]["pass"] == false);
  CHECK(j["condition_report"]["condition_b"]["pass"] == true);

  auto infeasible = cli({"fclt", "--model.preset=centered-poisson", "--t=1e7",
                         "--limits.max_memory_mb=0.01", "--N=100"});
  CHECK(infeasible.status == kExitInfeasible);
  CHECK(infeasible.err.find("MB") != std::string::npos);
}

TEST_CASE("cli: failed checks exit 4") {
  // with t = 1 the scaled path is nowhere near Gaussian
  std::vector<std::string> args{"fclt", "--model.preset=centered-poisson", "--t=1", "--N=500",
                                "--m=10", "--xs=[1]"};
  CHECK(cli(args).status == kExitChecksFailed);
}

TEST_CASE("cli: export-jumps") {
  const auto r = cli({"export-jumps", "--horizon", "20", "--model.preset=centered-poisson",
                      "--seed", "3"});
  CHECK(r.status == kExitPass);
  CHECK(r.out.rfind("# model: ", 0) == 0);
  CHECK(r.out.find("seed_master=3") != std::string::npos);
  CHECK(r.out.find("\ntime,size\n") != std::string::npos);
  CHECK(cli({"export-jumps", "--horizon", "20", "--model.preset=centered-poisson", "--seed",
             "3"}).out == r.out);
  CHECK(cli({"export-jumps", "--model.preset=centered-poisson"}).status == kExitConfigError);
}
