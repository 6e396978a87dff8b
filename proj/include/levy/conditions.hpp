#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace levy {

/// Real function of one positive argument: a closed-form power law
/// coeff * x^exponent, a piecewise-linear table, or an opaque callable.
class Curve {
 public:
  enum class Kind { power, table, custom };

  static Curve power(double coeff, double exponent);
  /// Piecewise-linear through (xs[i], ys[i]); xs strictly increasing.
  /// Evaluation outside [xs.front(), xs.back()] throws std::domain_error.
  static Curve table(std::vector<double> xs, std::vector<double> ys);
  static Curve custom(std::function<double(double)> fn, std::string label);

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  double coeff() const noexcept { return coeff_; }
  double exponent() const noexcept { return exponent_; }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }
  const std::string& label() const noexcept { return label_; }
  std::string describe() const;

  /// Custom curves compare by label.
  bool operator==(const Curve& other) const;

 private:
  Kind kind_ = Kind::power;
  double coeff_ = 1.0;
  double exponent_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::function<double(double)> fn_;
  std::string label_;
};

/// Sequence s_k, k = 1..n_max, with the exponent beta of condition (A).
struct ScheduleA {
  Curve s = Curve::power(1.0, 1.0);
  double beta = 1.0;
  std::size_t n_max = 10000;

  double at(std::size_t k) const { return s(static_cast<double>(k)); }
  /// s_k = values[k-1].
  static ScheduleA from_table(const std::vector<double>& values, double beta);
  bool operator==(const ScheduleA&) const = default;
};

/// Time change f with the exponent beta of condition (B).
struct TimeChangeB {
  Curve f = Curve::power(1.0, 1.0);
  double beta = 1.0;
  bool operator==(const TimeChangeB&) const = default;
};

enum class Divergence { diverges, converges, unverifiable };
std::string to_string(Divergence d);

/// Weight d(s) on [1, inf) and its integral D(S) = int_1^S d(s) ds.
struct WeightC {
  Curve d = Curve::power(0.5, -1.0);

  /// d(s) = 1 / (c s).
  static WeightC reciprocal(double c);

  double operator()(double s) const { return d(s); }
  /// Closed form for power laws, adaptive quadrature otherwise.
  double cumulative(double S) const;
  /// Analytic for power laws (int s^p diverges iff p >= -1); tables and
  /// custom callables are unverifiable.
  Divergence divergence() const;
  bool operator==(const WeightC&) const = default;
};

ScheduleA canonical_schedule(std::size_t n_max);
WeightC canonical_weight();
TimeChangeB canonical_time_change();

/// Relative slack allowed when comparing consecutive ratios, so that a
/// constant ratio computed in floating point still counts as nondecreasing.
inline constexpr double kMonotoneRelTol = 1e-12;
/// Absolute slack granted to the quadrature in the (C) interval test.
inline constexpr double kQuadratureTol = 1e-10;

struct ConditionAReport {
  bool pass = false;
  std::optional<std::size_t> first_violation;  // k with ratio_k < ratio_{k-1}
  std::size_t n_checked = 0;
  double beta = 0.0;
  std::vector<double> ratios;  // s_k / k^beta, k = 1..n_checked
};

struct ConditionBReport {
  bool pass = false;
  std::optional<std::size_t> first_violation_index;
  std::optional<double> first_violation_point;
  double beta = 0.0;
  std::vector<double> points;
  std::vector<double> ratios;
};

struct ConditionCReport {
  bool pass = false;
  bool positive = true;
  bool nonincreasing = true;
  std::optional<double> first_shape_violation;  // evaluation point
  bool intervals_ok = true;
  std::optional<std::size_t> first_interval_violation;  // k
  std::size_t k_max = 0;
  std::vector<double> integrals;  // int_k^{k+1} d, k = 1..k_max
  std::vector<double> bounds;     // ln(sqrt((k+1)/k))
  std::vector<double> margins;    // bound - integral
  Divergence divergence = Divergence::unverifiable;
};

/// Pass iff s_k / k^beta is nondecreasing for k = 1..n_max.
/// Throws std::domain_error on a nonpositive s_k or n_max < 2.
ConditionAReport check_condition_a(const ScheduleA& schedule);

/// Pass iff f(x) / x^beta is nondecreasing along the sorted positive points.
ConditionBReport check_condition_b(const TimeChangeB& tc,
                                   const std::vector<double>& x_points);

/// Interval test int_k^{k+1} d <= (1/2) ln((k+1)/k) for k = 1..k_max, shape
/// test (positive, nonincreasing) on integer and half-integer points, and
/// the divergence verdict. An unverifiable divergence does not fail the
/// check; it is reported as such.
ConditionCReport check_condition_c(const WeightC& w, std::size_t k_max);

/// Adaptive Gauss-Kronrod integral of fn over [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b);

nlohmann::ordered_json to_json(const ConditionAReport& r);
nlohmann::ordered_json to_json(const ConditionBReport& r);
nlohmann::ordered_json to_json(const ConditionCReport& r);

}  // namespace levy
