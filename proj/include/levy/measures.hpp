#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "levy/conditions.hpp"
#include "levy/simulate.hpp"

namespace levy {

double normal_cdf(double z) noexcept;

/// Finite measure sum_i w_i delta_{v_i} with w_i >= 0. `normalizer` is the
/// prefactor divisor the measure is nominally scaled by (ln n for the
/// logarithmic average, D(S) for the integral average); distances always
/// use the weight-normalized measure.
class WeightedSample {
 public:
  struct Atom {
    double value = 0.0;
    double weight = 0.0;
    bool operator==(const Atom&) const = default;
  };

  WeightedSample() = default;
  static WeightedSample equal_weights(std::span<const double> values);

  void add(double value, double weight);
  void reserve(std::size_t n) { atoms_.reserve(n); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_weight() const noexcept { return total_weight_; }

  double normalizer() const noexcept { return normalizer_; }
  void set_normalizer(double n) { normalizer_ = n; }
  /// total_weight / normalizer
  double nominal_mass() const noexcept { return total_weight_ / normalizer_; }

  /// Copy with weights divided by the total weight.
  WeightedSample normalized() const;
  bool is_normalized() const noexcept { return normalized_; }

 private:
  std::vector<Atom> atoms_;
  double total_weight_ = 0.0;
  double normalizer_ = 1.0;
  bool normalized_ = false;
};

class PathFunctional {
 public:
  enum class Kind { endpoint, supremum, value_at };

  static PathFunctional endpoint() { return {Kind::endpoint, 1.0}; }
  static PathFunctional supremum() { return {Kind::supremum, 1.0}; }
  /// Throws std::domain_error unless 0 <= x0 <= 1.
  static PathFunctional value_at(double x0);

  Kind kind() const noexcept { return kind_; }
  double x0() const noexcept { return x0_; }
  std::string describe() const;
  bool operator==(const PathFunctional&) const = default;

 private:
  PathFunctional(Kind kind, double x0) : kind_(kind), x0_(x0) {}
  Kind kind_;
  double x0_;
};

/// Grid index used by value_at(x0): floor(x0 m), guarded against x0 * m
/// landing a rounding error below an integer.
std::size_t grid_index(double x0, std::size_t m);

/// endpoint -> values[m]; supremum -> max of grid values;
/// value_at(x0) -> values[floor(x0 m)].
double apply_functional(const PathGrid& path, const PathFunctional& f);

class TargetLaw {
 public:
  enum class Kind { gaussian, wiener_sup, empirical_oracle };

  /// N(0, sd^2)
  static TargetLaw gaussian(double sd);
  /// Law of sup_{[0,1]} sigma W: P(. <= v) = 2 Phi(v / sigma) - 1, v >= 0.
  static TargetLaw wiener_sup(double sigma);
  /// Weight-normalized empirical law of an oracle sample.
  static TargetLaw empirical_oracle(const WeightedSample& oracle);

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  bool continuous() const noexcept { return kind_ != Kind::empirical_oracle; }

  double cdf(double v) const;
  std::string describe() const;

  /// Sorted oracle support and cumulative normalized weights.
  const std::vector<double>& oracle_values() const noexcept { return values_; }
  const std::vector<double>& oracle_cdf() const noexcept { return cumulative_; }

 private:
  TargetLaw() = default;
  Kind kind_ = Kind::gaussian;
  double scale_ = 1.0;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

double target_cdf(const TargetLaw& law, double v);

/// sup_v |F_hat(v) - F(v)| for the weight-normalized empirical CDF F_hat.
/// Continuous targets use max(|F_hat(v) - F(v)|, |F_hat(v-) - F(v)|) over
/// atoms; empirical oracles compare both step functions on the union of
/// their supports. Throws std::invalid_argument for an empty sample or zero
/// total weight.
double weighted_ks(const WeightedSample& sample, const TargetLaw& law);

/// Equal-weight two-sample KS distance.
double two_sample_ks(std::span<const double> a, std::span<const double> b);

/// Asymptotic one-sample KS critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

/// Atoms (values[k-1], 1/k), k = 1..n, normalizer ln n.
/// Throws std::invalid_argument for n < 2.
WeightedSample log_average_measure(std::span<const double> values);

/// Midpoint-rule discretization of int_1^S delta_{value_fn(t)} d(t) dt with
/// step dt (last cell truncated at S); normalizer D(S).
WeightedSample integral_average_measure(
    const std::function<double(double)>& value_fn, const WeightC& w, double S,
    double dt);

nlohmann::ordered_json to_json(const WeightedSample& sample);
void write_weighted_sample_csv(std::ostream& os, const WeightedSample& sample);

}  // namespace levy
