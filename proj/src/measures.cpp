#include "levy/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace levy {

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

WeightedSample WeightedSample::equal_weights(std::span<const double> values) {
  WeightedSample s;
  s.reserve(values.size());
  for (double v : values) s.add(v, 1.0);
  return s;
}

void WeightedSample::add(double value, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("atom weight must be finite and >= 0");
  }
  atoms_.push_back({value, weight});
  total_weight_ += weight;
  normalized_ = false;
}

WeightedSample WeightedSample::normalized() const {
  if (!(total_weight_ > 0.0)) {
    throw std::invalid_argument("cannot normalize a measure with zero total weight");
  }
  WeightedSample out;
  out.atoms_ = atoms_;
  for (auto& a : out.atoms_) a.weight /= total_weight_;
  out.total_weight_ = 1.0;
  out.normalizer_ = 1.0;
  out.normalized_ = true;
  return out;
}

PathFunctional PathFunctional::value_at(double x0) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) {
    throw std::domain_error("value_at needs x0 in [0, 1]");
  }
  return {Kind::value_at, x0};
}

std::string PathFunctional::describe() const {
  switch (kind_) {
    case Kind::endpoint: return "endpoint";
    case Kind::supremum: return "supremum";
    case Kind::value_at: {
      std::ostringstream os;
      os << "value_at(" << x0_ << ')';
      return os.str();
    }
  }
  return "unknown";
}

std::size_t grid_index(double x0, std::size_t m) {
  const double scaled = x0 * static_cast<double>(m);
  return std::min(m, static_cast<std::size_t>(std::floor(scaled + 1e-9)));
}

double apply_functional(const PathGrid& path, const PathFunctional& f) {
  if (path.values.empty()) throw std::invalid_argument("empty path grid");
  switch (f.kind()) {
    case PathFunctional::Kind::endpoint:
      return path.values.back();
    case PathFunctional::Kind::supremum:
      return *std::max_element(path.values.begin(), path.values.end());
    case PathFunctional::Kind::value_at:
      return path.values[grid_index(f.x0(), path.m())];
  }
  return 0.0;
}

TargetLaw TargetLaw::gaussian(double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian target needs sd > 0");
  TargetLaw law;
  law.kind_ = Kind::gaussian;
  law.scale_ = sd;
  return law;
}

TargetLaw TargetLaw::wiener_sup(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("wiener_sup target needs sigma > 0");
  TargetLaw law;
  law.kind_ = Kind::wiener_sup;
  law.scale_ = sigma;
  return law;
}

TargetLaw TargetLaw::empirical_oracle(const WeightedSample& oracle) {
  const WeightedSample normed = oracle.normalized();
  std::vector<WeightedSample::Atom> atoms = normed.atoms();
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  TargetLaw law;
  law.kind_ = Kind::empirical_oracle;
  double acc = 0.0;
  for (const auto& a : atoms) {
    acc += a.weight;
    if (!law.values_.empty() && law.values_.back() == a.value) {
      law.cumulative_.back() = acc;
    } else {
      law.values_.push_back(a.value);
      law.cumulative_.push_back(acc);
    }
  }
  if (!law.cumulative_.empty()) law.cumulative_.back() = 1.0;
  return law;
}

double TargetLaw::cdf(double v) const {
  switch (kind_) {
    case Kind::gaussian:
      return normal_cdf(v / scale_);
    case Kind::wiener_sup:
      return v < 0.0 ? 0.0 : 2.0 * normal_cdf(v / scale_) - 1.0;
    case Kind::empirical_oracle: {
      const auto it = std::upper_bound(values_.begin(), values_.end(), v);
      if (it == values_.begin()) return 0.0;
      return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
    }
  }
  return 0.0;
}

std::string TargetLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::gaussian: os << "gaussian(sd=" << scale_ << ')'; break;
    case Kind::wiener_sup: os << "wiener_sup(sigma=" << scale_ << ')'; break;
    case Kind::empirical_oracle:
      os << "empirical_oracle(" << values_.size() << " atoms)";
      break;
  }
  return os.str();
}

double target_cdf(const TargetLaw& law, double v) { return law.cdf(v); }

namespace {

struct Step {
  double value;
  double cdf;  // right-continuous value at `value`
};

// Sorted support of the normalized sample with tied atoms merged.
std::vector<Step> empirical_steps(const WeightedSample& sample) {
  if (sample.empty()) throw std::invalid_argument("weighted_ks: empty sample");
  if (!(sample.total_weight() > 0.0)) {
    throw std::invalid_argument("weighted_ks: sample has zero total weight");
  }
  std::vector<WeightedSample::Atom> atoms = sample.atoms();
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<Step> steps;
  steps.reserve(atoms.size());
  double acc = 0.0;
  const double total = sample.total_weight();
  for (const auto& a : atoms) {
    acc += a.weight / total;
    if (!steps.empty() && steps.back().value == a.value) {
      steps.back().cdf = acc;
    } else {
      steps.push_back({a.value, acc});
    }
  }
  steps.back().cdf = 1.0;
  return steps;
}

}  // namespace

double weighted_ks(const WeightedSample& sample, const TargetLaw& law) {
  const std::vector<Step> steps = empirical_steps(sample);
  double d = 0.0;
  if (law.continuous()) {
    double before = 0.0;
    for (const auto& s : steps) {
      const double f = law.cdf(s.value);
      d = std::max({d, std::abs(s.cdf - f), std::abs(before - f)});
      before = s.cdf;
    }
    return d;
  }

  // Both CDFs are right-continuous step functions; the sup of their
  // difference is attained at a point of the merged support.
  const auto& ov = law.oracle_values();
  const auto& oc = law.oracle_cdf();
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  while (i < steps.size() || j < ov.size()) {
    double x;
    if (j >= ov.size() || (i < steps.size() && steps[i].value <= ov[j])) {
      x = steps[i].value;
    } else {
      x = ov[j];
    }
    while (i < steps.size() && steps[i].value <= x) fa = steps[i++].cdf;
    while (j < ov.size() && ov[j] <= x) fb = oc[j++];
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
  return weighted_ks(WeightedSample::equal_weights(a),
                     TargetLaw::empirical_oracle(WeightedSample::equal_weights(b)));
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks_critical_value needs n >= 1 and alpha in (0,1)");
  }
  return std::sqrt(-0.5 * std::log(0.5 * alpha)) / std::sqrt(static_cast<double>(n));
}

WeightedSample log_average_measure(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("log_average_measure needs n >= 2 (ln 1 = 0)");
  }
  WeightedSample sample;
  sample.reserve(values.size());
  for (std::size_t k = 1; k <= values.size(); ++k) {
    sample.add(values[k - 1], 1.0 / static_cast<double>(k));
  }
  sample.set_normalizer(std::log(static_cast<double>(values.size())));
  return sample;
}

WeightedSample integral_average_measure(
    const std::function<double(double)>& value_fn, const WeightC& w, double S,
    double dt) {
  if (!(S > 1.0)) throw std::invalid_argument("integral average needs S > 1");
  if (!(dt > 0.0)) throw std::invalid_argument("integral average needs dt > 0");
  const auto cells = static_cast<std::size_t>(std::ceil((S - 1.0) / dt - 1e-9));
  WeightedSample sample;
  sample.reserve(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double lo = 1.0 + static_cast<double>(j) * dt;
    const double hi = std::min(lo + dt, S);
    if (!(hi > lo)) break;
    const double mid = 0.5 * (lo + hi);
    sample.add(value_fn(mid), w(mid) * (hi - lo));
  }
  sample.set_normalizer(w.cumulative(S));
  return sample;
}

nlohmann::ordered_json to_json(const WeightedSample& sample) {
  nlohmann::ordered_json j;
  j["total_weight"] = sample.total_weight();
  j["normalizer"] = sample.normalizer();
  j["normalized"] = sample.is_normalized();
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& a : sample.atoms()) atoms.push_back({a.value, a.weight});
  j["atoms"] = std::move(atoms);
  return j;
}

void write_weighted_sample_csv(std::ostream& os, const WeightedSample& sample) {
  const auto saved = os.precision(17);
  os << "value,weight\n";
  for (const auto& a : sample.atoms()) os << a.value << ',' << a.weight << '\n';
  os.precision(saved);
}

}  // namespace levy
