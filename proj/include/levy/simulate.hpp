#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levy/model.hpp"
#include "levy/rng.hpp"

namespace levy {

/// A path sampled on the uniform grid x_j = j/m of [0,1].
struct PathGrid {
  std::vector<double> values;  // m + 1 entries

  std::size_t m() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// Exact realization of V on [0, horizon]: sorted jump times and sizes, plus
/// cached prefix sums and running extremes so that V(t) and sup V on [0, t]
/// cost O(log #jumps). When the model has a Gaussian component, a standard
/// Brownian path is pre-sampled on a uniform grid of the horizon and
/// linearly interpolated between nodes.
class JumpRecord {
 public:
  /// Builds a record from explicit jumps. Times must be strictly increasing
  /// and lie in (0, horizon]. Only valid for models without diffusion.
  static JumpRecord from_jumps(const LevyModel& model, double horizon,
                               std::vector<double> times,
                               std::vector<double> sizes);

  double horizon() const noexcept { return horizon_; }
  const LevyModel& model() const noexcept { return model_; }
  const std::vector<double>& jump_times() const noexcept { return times_; }
  const std::vector<double>& jump_sizes() const noexcept { return sizes_; }
  const SeedStream& provenance() const noexcept { return provenance_; }
  bool has_diffusion() const noexcept { return !brownian_.empty(); }
  double diffusion_step() const noexcept { return diffusion_step_; }

  /// Number of jumps with time <= t.
  std::size_t jumps_upto(double t) const;
  /// Sum of jump sizes for the first `count` jumps.
  double jump_sum(std::size_t count) const { return cumulative_[count]; }
  /// max(0, sup of V and its left limits over the first `count` jumps).
  double prefix_max(std::size_t count) const { return prefix_max_[count]; }
  double prefix_min(std::size_t count) const { return prefix_min_[count]; }
  /// Interpolated standard Brownian path at t (0 without diffusion).
  double brownian_at(double t) const;

 private:
  friend JumpRecord sample_jumps(const LevyModel&, double, const SeedStream&);

  JumpRecord(const LevyModel& model, double horizon, std::vector<double> times,
             std::vector<double> sizes, SeedStream provenance);
  void build_caches();

  LevyModel model_;
  double horizon_;
  std::vector<double> times_;
  std::vector<double> sizes_;
  std::vector<double> cumulative_;
  std::vector<double> prefix_max_;
  std::vector<double> prefix_min_;
  std::vector<double> brownian_;
  double diffusion_step_ = 0.0;
  SeedStream provenance_;
};

/// Jump count ~ Poisson(rate * horizon); times i.i.d. uniform on
/// (0, horizon] then sorted; sizes i.i.d. from the jump law. Fully
/// determined by `seed`. Throws std::domain_error for horizon <= 0.
JumpRecord sample_jumps(const LevyModel& model, double horizon,
                        const SeedStream& seed);

/// Right-continuous evaluation: a jump exactly at t counts.
double eval_v(const JumpRecord& record, double t);

/// values[j] = V(t j / m) / sqrt(t). Requires 0 < t <= horizon, m >= 1.
PathGrid scale_path(const JumpRecord& record, double t, std::size_t m);

/// Exact sup over x in [0,1] of X_t(x) = V(t x) / sqrt(t) for pure-jump
/// models. Throws UnsupportedOperation when the model has diffusion.
double exact_sup(const JumpRecord& record, double t);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// Exact inf and sup of V over [0, upto], left limits included.
/// Pure-jump models only.
Range exact_range(const JumpRecord& record, double upto);

/// Y_kl of the coupling argument:
///   0 for x < s_l / s_k,  V(s_k x)/sqrt(s_k) - V(s_l)/sqrt(s_k) otherwise.
PathGrid build_coupled_path(const JumpRecord& record, double s_l, double s_k,
                            std::size_t m);

/// `count` paths of sigma * W on the grid of [0,1]; path p uses stream
/// derive_stream(master_seed, "wiener", p).
std::vector<PathGrid> simulate_wiener(double sigma, std::size_t m,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      unsigned threads = 1);

/// Rough resident size of one record, used for feasibility checks.
double estimate_record_bytes(const LevyModel& model, double horizon);

/// 64-bit FNV-1a digest of the jump times and sizes, as 16 hex digits.
std::string record_digest(const JumpRecord& record);

/// Two-column CSV export. The first line is a '#' comment carrying the
/// model, horizon and seed provenance.
void write_jump_record_csv(std::ostream& os, const JumpRecord& record);

}  // namespace levy
