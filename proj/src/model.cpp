#include "levy/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levy {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

JumpLaw JumpLaw::degenerate(double value) {
  require(std::isfinite(value), "degenerate jump value must be finite");
  return {Kind::degenerate, value, 0.0};
}

JumpLaw JumpLaw::gaussian(double mean, double sd) {
  require(std::isfinite(mean), "gaussian jump mean must be finite");
  require(sd > 0.0 && std::isfinite(sd), "gaussian jump sd must be > 0");
  return {Kind::gaussian, mean, sd};
}

JumpLaw JumpLaw::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential jump rate must be > 0");
  return {Kind::exponential, rate, 0.0};
}

JumpLaw JumpLaw::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "uniform jump law needs lo < hi");
  return {Kind::uniform, lo, hi};
}

double JumpLaw::mean() const noexcept {
  switch (kind_) {
    case Kind::degenerate: return p1_;
    case Kind::gaussian: return p1_;
    case Kind::exponential: return 1.0 / p1_;
    case Kind::uniform: return 0.5 * (p1_ + p2_);
  }
  return 0.0;
}

double JumpLaw::second_moment() const noexcept {
  switch (kind_) {
    case Kind::degenerate: return p1_ * p1_;
    case Kind::gaussian: return p1_ * p1_ + p2_ * p2_;
    case Kind::exponential: return 2.0 / (p1_ * p1_);
    case Kind::uniform: return (p1_ * p1_ + p1_ * p2_ + p2_ * p2_) / 3.0;
  }
  return 0.0;
}

std::complex<double> JumpLaw::cf(double u) const {
  switch (kind_) {
    case Kind::degenerate:
      return std::exp(kI * (u * p1_));
    case Kind::gaussian:
      return std::exp(kI * (u * p1_) - 0.5 * p2_ * p2_ * u * u);
    case Kind::exponential:
      return p1_ / (p1_ - kI * u);
    case Kind::uniform: {
      const double width = p2_ - p1_;
      const double half = 0.5 * u * width;
      if (std::abs(half) < 1e-8) return std::exp(kI * (u * mean()));
      // (e^{iub} - e^{iua}) / (iu(b-a)) = e^{iu(a+b)/2} sin(h)/h
      return std::exp(kI * (u * mean())) * (std::sin(half) / half);
    }
  }
  return {1.0, 0.0};
}

double JumpLaw::sample(Engine& rng) const {
  switch (kind_) {
    case Kind::degenerate:
      return p1_;
    case Kind::gaussian:
      return std::normal_distribution<double>(p1_, p2_)(rng);
    case Kind::exponential:
      return std::exponential_distribution<double>(p1_)(rng);
    case Kind::uniform:
      return std::uniform_real_distribution<double>(p1_, p2_)(rng);
  }
  return 0.0;
}

std::string to_string(JumpLaw::Kind kind) {
  switch (kind) {
    case JumpLaw::Kind::degenerate: return "degenerate";
    case JumpLaw::Kind::gaussian: return "gaussian";
    case JumpLaw::Kind::exponential: return "exponential";
    case JumpLaw::Kind::uniform: return "uniform";
  }
  return "unknown";
}

JumpLaw::Kind jump_kind_from_string(const std::string& name) {
  if (name == "degenerate") return JumpLaw::Kind::degenerate;
  if (name == "gaussian") return JumpLaw::Kind::gaussian;
  if (name == "exponential") return JumpLaw::Kind::exponential;
  if (name == "uniform") return JumpLaw::Kind::uniform;
  throw std::invalid_argument("unknown jump law kind '" + name + "'");
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << '(';
  switch (kind_) {
    case Kind::degenerate: os << p1_; break;
    case Kind::gaussian: os << "mean=" << p1_ << ",sd=" << p2_; break;
    case Kind::exponential: os << "rate=" << p1_; break;
    case Kind::uniform: os << "lo=" << p1_ << ",hi=" << p2_; break;
  }
  os << ')';
  return os.str();
}

LevyModel::LevyModel(JumpLaw jump_law, double poisson_rate, double diffusion_sd)
    : jump_law_(jump_law),
      poisson_rate_(poisson_rate),
      diffusion_sd_(diffusion_sd),
      drift_(-poisson_rate * jump_law.mean()) {
  require(poisson_rate > 0.0 && std::isfinite(poisson_rate),
          "poisson_rate must be > 0");
  require(diffusion_sd >= 0.0 && std::isfinite(diffusion_sd),
          "diffusion_sd must be >= 0");
  require(sigma_v_squared(*this) > 0.0,
          "model has sigma_V^2 = 0; the scaled process has no Wiener limit");
}

LevyModel LevyModel::centered_poisson() {
  return LevyModel(JumpLaw::degenerate(1.0));
}

LevyModel LevyModel::random_sum(double mean, double sd) {
  return LevyModel(JumpLaw::gaussian(mean, sd));
}

std::string LevyModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "jumps=" << jump_law_.describe() << " rate=" << poisson_rate_
     << " diffusion_sd=" << diffusion_sd_ << " drift=" << drift_;
  return os.str();
}

double sigma_v_squared(const LevyModel& model) noexcept {
  return model.poisson_rate() * model.jump_law().second_moment() +
         model.diffusion_sd() * model.diffusion_sd();
}

std::complex<double> theoretical_cf(const LevyModel& model, double t, double u) {
  if (!(t >= 0.0)) throw std::domain_error("theoretical_cf needs t >= 0");
  const double sd = model.diffusion_sd();
  const std::complex<double> exponent =
      model.poisson_rate() * (model.jump_law().cf(u) - 1.0) +
      kI * (u * model.drift()) - 0.5 * sd * sd * u * u;
  return std::exp(t * exponent);
}

std::complex<double> empirical_cf(std::span<const double> samples, double u) {
  if (samples.empty()) {
    throw std::invalid_argument("empirical_cf: no samples");
  }
  double re = 0.0;
  double im = 0.0;
  for (double v : samples) {
    re += std::cos(u * v);
    im += std::sin(u * v);
  }
  const double n = static_cast<double>(samples.size());
  return {re / n, im / n};
}

}  // namespace levy
