#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "levy/conditions.hpp"
#include "levy/measures.hpp"
#include "levy/model.hpp"
#include "levy/report.hpp"
#include "levy/simulate.hpp"

namespace levy {

/// Seeds, parallelism and resource budget shared by every harness. Reports
/// never depend on `threads`.
struct RunContext {
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double max_memory_mb = 4096.0;
};

/// Functional of X_t = V(t .)/sqrt(t) on the grid of mesh 1/m, evaluated
/// directly from the record. Equal to apply_functional(scale_path(...)),
/// except that the supremum is exact for pure-jump models.
double evaluate_functional(const JumpRecord& record, double t,
                           const PathFunctional& functional, std::size_t m);

/// Law of functional(sigma W): gaussian(sigma sqrt(x)) for value_at(x) on the
/// grid, gaussian(sigma) for the endpoint, wiener_sup(sigma) for the sup.
TargetLaw wiener_target(const PathFunctional& functional, double sigma,
                        std::size_t m);

struct FcltOptions {
  double ks_threshold = 0.05;
  double sup_ks_threshold = 0.06;
  double stderr_multiplier = 5.0;
};

/// Finite-dimensional, increment, covariance and supremum checks of a path
/// sample against sigma W. `sups` overrides the grid maximum per path (exact
/// suprema for jump paths); pass an empty span to use the grid.
TheoremReport check_fclt_paths(std::span<const PathGrid> paths,
                               std::span<const double> sups, double sigma,
                               const std::vector<double>& xs,
                               const FcltOptions& options,
                               const std::vector<std::uint64_t>& seeds);

/// N independent records on [0, t], scaled by t, checked against sigma_V W.
TheoremReport run_fclt_test(const LevyModel& model, double t,
                            const std::vector<double>& xs, std::size_t m,
                            std::size_t N, const RunContext& ctx,
                            const FcltOptions& options = {});

struct AscltOptions {
  std::size_t seed_panel = 20;
  double ks_threshold = 0.2;
};

/// Logarithmic average along one realization per panel seed:
/// Q_n = sum_k (1/k) delta_{F_k} with F_k the functional of X_{s_k}.
/// Throws ConditionRefusal if the schedule fails (A) on 1..n.
TheoremReport run_asclt(const LevyModel& model, const ScheduleA& schedule,
                        std::size_t n, const PathFunctional& functional,
                        std::size_t m, const RunContext& ctx,
                        const AscltOptions& options = {});

struct IntegralAscltOptions {
  std::size_t seed_panel = 20;
  double ks_threshold = 0.25;
};

/// Integral average Q_S = (1/D(S)) int_1^S delta_{Y_s} d(s) ds along one
/// realization per panel seed, with Y_s = V(f(s) .)/sqrt(f(s)).
/// Throws ConditionRefusal if f fails (B) or d fails (C).
TheoremReport run_integral_asclt(const LevyModel& model, const TimeChangeB& tc,
                                 const WeightC& w, double S, double dt,
                                 const PathFunctional& functional,
                                 std::size_t m, const RunContext& ctx,
                                 const IntegralAscltOptions& options = {});

/// Monte Carlo estimate of E sup_x |Y_k(x) - Y_kl(x)| against
/// 5 sigma_V (l/k)^{beta/2}; a pair passes iff estimate + 3 stderr <= bound.
TheoremReport audit_moment_bound(
    const LevyModel& model, const ScheduleA& schedule,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    std::size_t N, std::size_t m, const RunContext& ctx);

/// Shifts every simulated V(t) by bias * t; lets tests confirm that the
/// check detects a miscentered process.
struct CfCheckHooks {
  double sample_drift_bias = 0.0;
};

/// |empirical_cf - theoretical_cf| <= 3/sqrt(N) + 0.01 at every u.
TheoremReport run_cf_check(const LevyModel& model, double t,
                           const std::vector<double>& u_grid, std::size_t N,
                           const RunContext& ctx, const CfCheckHooks& hooks = {});

}  // namespace levy
