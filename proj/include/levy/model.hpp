#pragma once

#include <complex>
#include <span>
#include <string>

#include "levy/rng.hpp"

namespace levy {

/// Law of the i.i.d. jump sizes of a compound Poisson process. The menu is
/// closed so that mean, second moment and characteristic function stay in
/// closed form.
class JumpLaw {
 public:
  enum class Kind { degenerate, gaussian, exponential, uniform };

  static JumpLaw degenerate(double value);
  static JumpLaw gaussian(double mean, double sd);
  static JumpLaw exponential(double rate);
  static JumpLaw uniform(double lo, double hi);

  Kind kind() const noexcept { return kind_; }
  /// First and second parameter as passed to the factory (second is 0 for
  /// one-parameter kinds).
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }

  double mean() const noexcept;
  double second_moment() const noexcept;
  std::complex<double> cf(double u) const;
  double sample(Engine& rng) const;

  std::string describe() const;
  bool operator==(const JumpLaw&) const = default;

 private:
  JumpLaw(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p1_;
  double p2_;
};

std::string to_string(JumpLaw::Kind kind);
JumpLaw::Kind jump_kind_from_string(const std::string& name);

/// Centered compound Poisson process with an optional Brownian component:
///   V(t) = sum_{i <= pi(t)} xi_i + drift * t + diffusion_sd * B(t),
/// with drift = -poisson_rate * E[xi] fixed by construction.
class LevyModel {
 public:
  /// Throws std::invalid_argument for rate <= 0, diffusion_sd < 0, or a
  /// model with zero variance (the scaled limit would be degenerate).
  LevyModel(JumpLaw jump_law, double poisson_rate = 1.0,
            double diffusion_sd = 0.0);

  /// Unit jumps at rate 1: V(t) = pi(t) - t.
  static LevyModel centered_poisson();
  /// Jumps ~ N(mean, sd^2) at rate 1, centered by -mean * t.
  static LevyModel random_sum(double mean, double sd);

  const JumpLaw& jump_law() const noexcept { return jump_law_; }
  double poisson_rate() const noexcept { return poisson_rate_; }
  double diffusion_sd() const noexcept { return diffusion_sd_; }
  double drift() const noexcept { return drift_; }

  std::string describe() const;
  bool operator==(const LevyModel&) const = default;

 private:
  JumpLaw jump_law_;
  double poisson_rate_;
  double diffusion_sd_;
  double drift_;
};

/// Variance of V(1): rate * E[xi^2] + diffusion_sd^2. Also the squared scale
/// of the limiting Wiener process.
double sigma_v_squared(const LevyModel& model) noexcept;

/// E exp(i u V(t)) = exp(t [rate (phi_xi(u) - 1) + i u drift - sd^2 u^2 / 2]).
std::complex<double> theoretical_cf(const LevyModel& model, double t, double u);

/// Sample mean of exp(i u v). Throws std::invalid_argument on empty input.
std::complex<double> empirical_cf(std::span<const double> samples, double u);

}  // namespace levy
