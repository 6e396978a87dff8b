// Acceptance battery: one line per criterion, nonzero exit if any fails.
//   acceptance               run all ten
//   acceptance --criterion N run one
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levy/conditions.hpp"
#include "levy/errors.hpp"
#include "levy/theorems.hpp"

using namespace levy;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " !" << what;
    }
  }
};

RunContext context() {
  RunContext ctx;
  ctx.master_seed = 1;
  ctx.threads = default_threads();
  return ctx;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const std::vector<double> kXs{0.25, 0.5, 0.75, 1.0};

const Check& get(const TheoremReport& r, const std::string& name) {
  const Check* c = r.find(name);
  if (c == nullptr) throw std::logic_error("report has no check " + name);
  return *c;
}

// every check whose name starts with one of `prefixes` must pass
void require_family(Outcome& o, const TheoremReport& r,
                    std::initializer_list<const char*> prefixes) {
  std::size_t seen = 0;
  for (const auto& c : r.checks) {
    for (const char* p : prefixes) {
      if (c.name.rfind(p, 0) == 0) {
        ++seen;
        o.require(c.pass, c.name + "=" + std::to_string(c.statistic));
      }
    }
  }
  o.require(seen > 0, "no checks matched");
}

Outcome criterion_1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_fclt_test(LevyModel::centered_poisson(), 1e4, kXs, 1000, 2000, context());
  const double secs = seconds_since(start);
  const auto& ks = get(r, "ks_endpoint");
  o.detail << "endpoint KS " << ks.statistic << " < 0.05";
  o.require(ks.pass, "endpoint");
  require_family(o, r, {"ks_increment", "second_moment_increment", "cov("});
  o.detail << "; increments/covariances within 5 SE; " << secs << " s < 60 s";
  o.require(secs < 60.0, "runtime");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto r = run_fclt_test(LevyModel::random_sum(1.0, 1.0), 1e4, kXs, 1000, 2000, context());
  const auto& ks = get(r, "ks_endpoint");
  o.detail << "gaussian(1,1) jumps, endpoint KS vs N(0, sqrt 2) " << ks.statistic << " < 0.05";
  o.require(ks.pass, "endpoint");
  o.require(std::abs(r.data["sigma"].get<double>() - std::sqrt(2.0)) < 1e-12, "sigma");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto r = run_fclt_test(LevyModel::centered_poisson(), 1e4, {1.0}, 1000, 2000, context());
  const auto& ks = get(r, "ks_supremum");
  o.detail << "exact supremum KS vs 2 Phi(a) - 1: " << ks.statistic << " < 0.06";
  o.require(ks.pass, "supremum");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_asclt(LevyModel::centered_poisson(), canonical_schedule(10000), 10000,
                           PathFunctional::endpoint(), 1000, context(), AscltOptions{20, 0.2});
  const double secs = seconds_since(start);
  const auto& med = r.data["median_ks"];
  o.detail << "median weighted KS at n = 1e2, 1e3, 1e4:";
  for (const auto& v : med) o.detail << ' ' << v.get<double>();
  o.detail << " (need < 0.2 at 1e4, strictly decreasing); " << secs << " s < 300 s";
  o.require(get(r, "median_weighted_ks_at_n").pass, "final");
  o.require(get(r, "median_ks_strictly_decreasing").pass, "monotone");
  o.require(secs < 300.0, "runtime");
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto r = run_integral_asclt(LevyModel::centered_poisson(), canonical_time_change(),
                                    canonical_weight(), 1e4, 0.1, PathFunctional::endpoint(),
                                    1000, context(), IntegralAscltOptions{20, 0.25});
  const auto& med = r.data["median_ks"];
  o.detail << "median weighted KS at S = 1e2 .. 1e4:";
  for (const auto& v : med) o.detail << ' ' << v.get<double>();
  o.detail << " (need < 0.25 at 1e4 and below the S = 1e2 value)";
  o.require(get(r, "median_weighted_ks_at_S").pass, "final");
  o.require(get(r, "median_ks_final_minus_first").pass, "trend");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const auto r = audit_moment_bound(LevyModel::centered_poisson(), canonical_schedule(50),
                                    {{1, 10}, {2, 20}, {5, 50}}, 500, 1000, context());
  o.detail << "estimate + 3 SE vs 5 sigma sqrt(l/k):";
  for (const auto& c : r.checks) {
    o.detail << ' ' << c.name << ' ' << c.statistic << " <= " << c.threshold << ';';
    o.require(c.pass, c.name);
  }
  o.require(r.checks.size() == 3, "pair count");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  std::vector<double> grid;
  for (int i = -6; i <= 6; ++i) grid.push_back(0.5 * i);
  const std::vector<JumpLaw> laws{JumpLaw::degenerate(1.0), JumpLaw::gaussian(1.0, 1.0),
                                  JumpLaw::exponential(1.0), JumpLaw::uniform(-1.0, 2.0)};
  o.detail << "max |cf deviation| (threshold " << 3.0 / std::sqrt(1e4) + 0.01 << "):";
  for (const auto& law : laws) {
    const auto r = run_cf_check(LevyModel(law), 1.0, grid, 10000, context());
    double worst = 0.0;
    for (const auto& c : r.checks) worst = std::max(worst, c.statistic);
    o.detail << ' ' << to_string(law.kind()) << ' ' << worst;
    o.require(r.passed() && r.checks.size() == grid.size(), law.describe());
  }
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto c_ok = check_condition_c(canonical_weight(), 10000);
  double worst_margin = 0.0;
  for (double m : c_ok.margins) worst_margin = std::max(worst_margin, std::abs(m));
  o.require(c_ok.pass, "1/(2s) should pass (C)");
  o.require(worst_margin <= 1e-9, "margin");

  const auto c_bad = check_condition_c(WeightC{Curve::power(1.0, -1.0)}, 100);
  o.require(!c_bad.pass && c_bad.first_interval_violation == std::optional<std::size_t>{1},
            "1/s should fail (C) at k = 1");

  o.require(check_condition_a(canonical_schedule(10000)).pass, "s_k = k should pass (A)");
  const TimeChangeB root{Curve::power(1.0, 0.5), 1.0};
  std::vector<double> pts;
  for (int i = 0; i <= 100; ++i) pts.push_back(1.0 + i);
  o.require(!check_condition_b(root, pts).pass, "sqrt should fail (B)");
  o.detail << "(C) 1/(2s) passes with max margin " << worst_margin
           << "; 1/s fails at k = 1; (A) s_k = k passes; (B) sqrt x fails";
  return o;
}

std::string strip_clock(const TheoremReport& r) {
  auto j = to_json(r);
  j.erase("wall_clock_seconds");
  return j.dump();
}

Outcome criterion_9() {
  Outcome o;
  RunContext serial;
  RunContext parallel;
  parallel.threads = std::max(4u, default_threads());
  const auto model = LevyModel::random_sum(0.5, 1.0);
  const std::vector<std::pair<std::string, std::function<TheoremReport(const RunContext&)>>> runs{
      {"fclt", [&](const RunContext& c) { return run_fclt_test(model, 500.0, kXs, 100, 300, c); }},
      {"asclt",
       [&](const RunContext& c) {
         return run_asclt(model, canonical_schedule(1000), 1000, PathFunctional::supremum(), 100,
                          c, AscltOptions{5, 0.2});
       }},
      {"integral-asclt",
       [&](const RunContext& c) {
         return run_integral_asclt(model, canonical_time_change(), canonical_weight(), 300.0, 0.1,
                                   PathFunctional::value_at(0.5), 100, c,
                                   IntegralAscltOptions{5, 0.25});
       }},
      {"moment-audit",
       [&](const RunContext& c) {
         return audit_moment_bound(model, canonical_schedule(50), {{1, 10}, {5, 50}}, 200, 100, c);
       }},
      {"cf-check",
       [&](const RunContext& c) { return run_cf_check(model, 1.0, {-1.0, 0.5, 2.0}, 2000, c); }},
  };
  o.detail << "threads 1 vs " << parallel.threads << ":";
  for (const auto& [name, run] : runs) {
    const bool same = strip_clock(run(serial)) == strip_clock(run(parallel));
    o.detail << ' ' << name << (same ? " identical" : " DIFFERS") << ';';
    o.require(same, name);
  }
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const auto ctx = context();
  const auto paths = simulate_wiener(1.0, 1000, 5000, ctx.master_seed, ctx.threads);
  const auto r = check_fclt_paths(paths, {}, 1.0, kXs, FcltOptions{}, {ctx.master_seed});
  o.detail << "exact Wiener paths: endpoint KS " << get(r, "ks_endpoint").statistic;
  o.require(get(r, "ks_endpoint").pass, "endpoint");
  require_family(o, r, {"ks_value_at", "cov("});
  o.detail << "; covariances within 5 SE";
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"centered Poisson invariance", criterion_1},
    {"gaussian-jump invariance", criterion_2},
    {"supremum law", criterion_3},
    {"logarithmic average along one path", criterion_4},
    {"integral average along one path", criterion_5},
    {"coupling moment bound", criterion_6},
    {"characteristic function", criterion_7},
    {"condition validators", criterion_8},
    {"thread-count determinism", criterion_9},
    {"Wiener oracle self-consistency", criterion_10},
};

bool run_one(std::size_t index) {
  const auto& [name, fn] = kCriteria[index - 1];
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "threw: " << e.what();
  }
  std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " C" << index << ' ' << name << ": "
            << o.detail.str() << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance battery", "acceptance"};
  std::size_t criterion = 0;
  app.add_option("--criterion", criterion, "run a single criterion (1-10)")
      ->check(CLI::Range(std::size_t{1}, kCriteria.size()));
  CLI11_PARSE(app, argc, argv);

  std::cout << std::setprecision(4);
  bool ok = true;
  if (criterion != 0) {
    ok = run_one(criterion);
  } else {
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) ok = run_one(i) && ok;
  }
  return ok ? 0 : 1;
}
