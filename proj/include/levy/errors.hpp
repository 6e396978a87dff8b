#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Operation requested on a model it cannot handle exactly
/// (e.g. an exact supremum of a path with a Gaussian component).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A harness declined to run because a structural hypothesis failed.
/// `report_json` carries the serialized condition report.
class ConditionRefusal : public std::runtime_error {
 public:
  ConditionRefusal(const std::string& what, std::string report_json)
      : std::runtime_error(what), report_json_(std::move(report_json)) {}
  const std::string& report_json() const noexcept { return report_json_; }

 private:
  std::string report_json_;
};

/// The requested simulation would exceed the configured memory budget.
class InfeasibleRequest : public std::runtime_error {
 public:
  InfeasibleRequest(const std::string& what, double required_mb)
      : std::runtime_error(what), required_mb_(required_mb) {}
  double required_mb() const noexcept { return required_mb_; }

 private:
  double required_mb_;
};

/// Schema violation in an experiment config.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace levy
