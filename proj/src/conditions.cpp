#include "levy/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levy {

Curve Curve::power(double coeff, double exponent) {
  if (!std::isfinite(coeff) || !std::isfinite(exponent)) {
    throw std::invalid_argument("power curve needs finite coeff and exponent");
  }
  Curve c;
  c.kind_ = Kind::power;
  c.coeff_ = coeff;
  c.exponent_ = exponent;
  return c;
}

Curve Curve::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw std::invalid_argument("table curve needs equal-length, nonempty x and y");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("table curve x values must be strictly increasing");
    }
  }
  Curve c;
  c.kind_ = Kind::table;
  c.xs_ = std::move(xs);
  c.ys_ = std::move(ys);
  return c;
}

Curve Curve::custom(std::function<double(double)> fn, std::string label) {
  Curve c;
  c.kind_ = Kind::custom;
  c.fn_ = std::move(fn);
  c.label_ = std::move(label);
  return c;
}

double Curve::operator()(double x) const {
  switch (kind_) {
    case Kind::power:
      return coeff_ * std::pow(x, exponent_);
    case Kind::table: {
      if (x < xs_.front() || x > xs_.back()) {
        std::ostringstream os;
        os << "table curve evaluated at " << x << " outside [" << xs_.front()
           << ", " << xs_.back() << "]";
        throw std::domain_error(os.str());
      }
      const auto hi = std::lower_bound(xs_.begin(), xs_.end(), x);
      const auto i = static_cast<std::size_t>(hi - xs_.begin());
      if (xs_[i] == x) return ys_[i];
      const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + w * (ys_[i] - ys_[i - 1]);
    }
    case Kind::custom:
      return fn_(x);
  }
  return 0.0;
}

std::string Curve::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::power: os << coeff_ << "*x^" << exponent_; break;
    case Kind::table: os << "table[" << xs_.size() << " points]"; break;
    case Kind::custom: os << label_; break;
  }
  return os.str();
}

bool Curve::operator==(const Curve& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::power:
      return coeff_ == other.coeff_ && exponent_ == other.exponent_;
    case Kind::table:
      return xs_ == other.xs_ && ys_ == other.ys_;
    case Kind::custom:
      return label_ == other.label_;
  }
  return false;
}

ScheduleA ScheduleA::from_table(const std::vector<double>& values, double beta) {
  std::vector<double> ks(values.size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i + 1);
  return {Curve::table(std::move(ks), values), beta, values.size()};
}

std::string to_string(Divergence d) {
  switch (d) {
    case Divergence::diverges: return "diverges";
    case Divergence::converges: return "converges";
    case Divergence::unverifiable: return "unverifiable";
  }
  return "unknown";
}

WeightC WeightC::reciprocal(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("weight 1/(c s) needs c > 0");
  return {Curve::power(1.0 / c, -1.0)};
}

double WeightC::cumulative(double S) const {
  if (!(S >= 1.0)) throw std::domain_error("D(S) needs S >= 1");
  if (d.kind() == Curve::Kind::power) {
    const double p = d.exponent();
    if (p == -1.0) return d.coeff() * std::log(S);
    return d.coeff() * (std::pow(S, p + 1.0) - 1.0) / (p + 1.0);
  }
  return integrate([this](double s) { return d(s); }, 1.0, S);
}

Divergence WeightC::divergence() const {
  if (d.kind() != Curve::Kind::power) return Divergence::unverifiable;
  if (d.coeff() > 0.0 && d.exponent() >= -1.0) return Divergence::diverges;
  return Divergence::converges;
}

ScheduleA canonical_schedule(std::size_t n_max) {
  return {Curve::power(1.0, 1.0), 1.0, n_max};
}

WeightC canonical_weight() { return WeightC::reciprocal(2.0); }

TimeChangeB canonical_time_change() { return {Curve::power(1.0, 1.0), 1.0}; }

double integrate(const std::function<double(double)>& fn, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  return gauss_kronrod<double, 21>::integrate(fn, a, b, 15, 1e-13, &error);
}

ConditionAReport check_condition_a(const ScheduleA& schedule) {
  if (schedule.n_max < 2) throw std::domain_error("condition (A) check needs n_max >= 2");
  if (!(schedule.beta > 0.0)) throw std::domain_error("condition (A) needs beta > 0");
  ConditionAReport report;
  report.beta = schedule.beta;
  report.n_checked = schedule.n_max;
  report.ratios.reserve(schedule.n_max);
  for (std::size_t k = 1; k <= schedule.n_max; ++k) {
    const double s = schedule.at(k);
    if (!(s > 0.0)) {
      std::ostringstream os;
      os << "schedule value s_" << k << " = " << s << " is not positive";
      throw std::domain_error(os.str());
    }
    const double ratio = s / std::pow(static_cast<double>(k), schedule.beta);
    if (!report.first_violation && k > 1) {
      const double prev = report.ratios.back();
      if (ratio < prev * (1.0 - kMonotoneRelTol)) report.first_violation = k;
    }
    report.ratios.push_back(ratio);
  }
  report.pass = !report.first_violation.has_value();
  return report;
}

ConditionBReport check_condition_b(const TimeChangeB& tc,
                                   const std::vector<double>& x_points) {
  if (!(tc.beta > 0.0)) throw std::domain_error("condition (B) needs beta > 0");
  if (x_points.empty()) throw std::domain_error("condition (B) needs evaluation points");
  ConditionBReport report;
  report.beta = tc.beta;
  report.points = x_points;
  for (std::size_t i = 0; i < x_points.size(); ++i) {
    const double x = x_points[i];
    if (!(x > 0.0) || (i > 0 && x < x_points[i - 1])) {
      throw std::domain_error("condition (B) points must be positive and sorted");
    }
    const double fx = tc.f(x);
    if (!(fx > 0.0)) {
      std::ostringstream os;
      os << "time change f(" << x << ") = " << fx << " is not positive";
      throw std::domain_error(os.str());
    }
    const double ratio = fx / std::pow(x, tc.beta);
    if (!report.first_violation_index && i > 0 &&
        ratio < report.ratios.back() * (1.0 - kMonotoneRelTol)) {
      report.first_violation_index = i;
      report.first_violation_point = x;
    }
    report.ratios.push_back(ratio);
  }
  report.pass = !report.first_violation_index.has_value();
  return report;
}

ConditionCReport check_condition_c(const WeightC& w, std::size_t k_max) {
  if (k_max < 1) throw std::domain_error("condition (C) check needs k_max >= 1");
  ConditionCReport report;
  report.k_max = k_max;

  // Shape: positive and nonincreasing on 1, 1.5, 2, ..., k_max + 1.
  double prev = 0.0;
  for (std::size_t i = 0; i <= 2 * k_max; ++i) {
    const double s = 1.0 + 0.5 * static_cast<double>(i);
    const double value = w(s);
    if (!(value > 0.0)) {
      report.positive = false;
      if (!report.first_shape_violation) report.first_shape_violation = s;
    } else if (i > 0 && value > prev * (1.0 + kMonotoneRelTol)) {
      report.nonincreasing = false;
      if (!report.first_shape_violation) report.first_shape_violation = s;
    }
    prev = value;
  }

  report.integrals.reserve(k_max);
  report.bounds.reserve(k_max);
  report.margins.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double a = static_cast<double>(k);
    const double integral = integrate([&w](double s) { return w(s); }, a, a + 1.0);
    const double bound = 0.5 * std::log1p(1.0 / a);
    report.integrals.push_back(integral);
    report.bounds.push_back(bound);
    report.margins.push_back(bound - integral);
    if (integral > bound + kQuadratureTol && !report.first_interval_violation) {
      report.first_interval_violation = k;
    }
  }
  report.intervals_ok = !report.first_interval_violation.has_value();
  report.divergence = w.divergence();
  report.pass = report.positive && report.nonincreasing && report.intervals_ok &&
                report.divergence != Divergence::converges;
  return report;
}

namespace {

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const ConditionAReport& r) {
  nlohmann::ordered_json j;
  j["condition"] = "A";
  j["pass"] = r.pass;
  j["first_violation_k"] = optional_json(r.first_violation);
  j["verified_range"] = {1, r.n_checked};
  j["beta"] = r.beta;
  j["ratios"] = r.ratios;
  return j;
}

nlohmann::ordered_json to_json(const ConditionBReport& r) {
  nlohmann::ordered_json j;
  j["condition"] = "B";
  j["pass"] = r.pass;
  j["first_violation_point"] = optional_json(r.first_violation_point);
  if (!r.points.empty()) j["verified_range"] = {r.points.front(), r.points.back()};
  j["beta"] = r.beta;
  j["points"] = r.points;
  j["ratios"] = r.ratios;
  return j;
}

nlohmann::ordered_json to_json(const ConditionCReport& r) {
  nlohmann::ordered_json j;
  j["condition"] = "C";
  j["pass"] = r.pass;
  j["positive"] = r.positive;
  j["nonincreasing"] = r.nonincreasing;
  j["first_shape_violation"] = optional_json(r.first_shape_violation);
  j["intervals_ok"] = r.intervals_ok;
  j["first_interval_violation_k"] = optional_json(r.first_interval_violation);
  j["divergence"] = to_string(r.divergence);
  j["verified_range"] = {1, r.k_max};
  j["margins"] = r.margins;
  return j;
}

}  // namespace levy
