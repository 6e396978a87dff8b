#include "levy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "levy/errors.hpp"

namespace levy {

namespace {

constexpr double kDiffusionCellsPerUnit = 64.0;
constexpr std::size_t kMinDiffusionCells = 1024;
constexpr std::size_t kMaxDiffusionCells = std::size_t{1} << 24;

std::size_t diffusion_cells(double horizon) {
  const double wanted = std::ceil(horizon * kDiffusionCellsPerUnit);
  return std::clamp(static_cast<std::size_t>(wanted), kMinDiffusionCells,
                    kMaxDiffusionCells);
}

void check_time(const JumpRecord& record, double t) {
  if (!(t >= 0.0 && t <= record.horizon())) {
    std::ostringstream os;
    os << "time " << t << " outside record horizon [0, " << record.horizon()
       << "]";
    throw std::domain_error(os.str());
  }
}

void check_scale(const JumpRecord& record, double t) {
  if (!(t > 0.0)) throw std::domain_error("scale parameter t must be > 0");
  if (t > record.horizon()) {
    std::ostringstream os;
    os << "scaling by t = " << t << " needs a record horizon of at least " << t
       << ", have " << record.horizon();
    throw std::domain_error(os.str());
  }
}

void require_pure_jump(const JumpRecord& record, const char* op) {
  if (record.has_diffusion()) {
    throw UnsupportedOperation(std::string(op) +
                               " is exact only for pure-jump models; "
                               "use a dense grid when diffusion_sd > 0");
  }
}

}  // namespace

JumpRecord::JumpRecord(const LevyModel& model, double horizon,
                       std::vector<double> times, std::vector<double> sizes,
                       SeedStream provenance)
    : model_(model),
      horizon_(horizon),
      times_(std::move(times)),
      sizes_(std::move(sizes)),
      provenance_(provenance) {}

JumpRecord JumpRecord::from_jumps(const LevyModel& model, double horizon,
                                  std::vector<double> times,
                                  std::vector<double> sizes) {
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be > 0");
  if (model.diffusion_sd() > 0.0) {
    throw std::invalid_argument(
        "from_jumps builds pure-jump records only; use sample_jumps");
  }
  if (times.size() != sizes.size()) {
    throw std::invalid_argument("jump times and sizes differ in length");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] <= horizon)) {
      throw std::domain_error("jump time outside (0, horizon]");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("jump times must be strictly increasing");
    }
  }
  JumpRecord record(model, horizon, std::move(times), std::move(sizes), {});
  record.build_caches();
  return record;
}

void JumpRecord::build_caches() {
  const std::size_t n = times_.size();
  cumulative_.assign(n + 1, 0.0);
  prefix_max_.assign(n + 1, 0.0);
  prefix_min_.assign(n + 1, 0.0);
  const double drift = model_.drift();
  for (std::size_t i = 0; i < n; ++i) {
    cumulative_[i + 1] = cumulative_[i] + sizes_[i];
    const double before = cumulative_[i] + drift * times_[i];
    const double after = cumulative_[i + 1] + drift * times_[i];
    prefix_max_[i + 1] = std::max({prefix_max_[i], before, after});
    prefix_min_[i + 1] = std::min({prefix_min_[i], before, after});
  }
}

std::size_t JumpRecord::jumps_upto(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
}

double JumpRecord::brownian_at(double t) const {
  if (brownian_.empty()) return 0.0;
  const double pos = t / diffusion_step_;
  const std::size_t last = brownian_.size() - 1;
  const auto idx = std::min(static_cast<std::size_t>(pos), last);
  if (idx == last) return brownian_[last];
  const double frac = pos - static_cast<double>(idx);
  return brownian_[idx] + frac * (brownian_[idx + 1] - brownian_[idx]);
}

JumpRecord sample_jumps(const LevyModel& model, double horizon,
                        const SeedStream& seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::domain_error("sample_jumps: horizon must be > 0");
  }
  Engine rng = make_engine(seed);

  const auto count = std::poisson_distribution<std::size_t>(
      model.poisson_rate() * horizon)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> times(count);
  // horizon * (1 - u) with u in [0, 1) lands in (0, horizon].
  for (;;) {
    for (double& t : times) t = horizon * (1.0 - unit(rng));
    std::sort(times.begin(), times.end());
    if (std::adjacent_find(times.begin(), times.end()) == times.end()) break;
  }
  std::vector<double> sizes(count);
  for (double& s : sizes) s = model.jump_law().sample(rng);

  JumpRecord record(model, horizon, std::move(times), std::move(sizes), seed);
  if (model.diffusion_sd() > 0.0) {
    const std::size_t cells = diffusion_cells(horizon);
    record.diffusion_step_ = horizon / static_cast<double>(cells);
    std::normal_distribution<double> gauss(0.0, std::sqrt(record.diffusion_step_));
    record.brownian_.resize(cells + 1);
    record.brownian_[0] = 0.0;
    for (std::size_t i = 1; i <= cells; ++i) {
      record.brownian_[i] = record.brownian_[i - 1] + gauss(rng);
    }
  }
  record.build_caches();
  return record;
}

double eval_v(const JumpRecord& record, double t) {
  check_time(record, t);
  const LevyModel& model = record.model();
  double v = record.jump_sum(record.jumps_upto(t)) + model.drift() * t;
  if (record.has_diffusion()) v += model.diffusion_sd() * record.brownian_at(t);
  return v;
}

PathGrid scale_path(const JumpRecord& record, double t, std::size_t m) {
  if (m == 0) throw std::domain_error("grid needs m >= 1");
  check_scale(record, t);
  const double root = std::sqrt(t);
  PathGrid path;
  path.values.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(m);
    path.values[j] = eval_v(record, t * x) / root;
  }
  return path;
}

Range exact_range(const JumpRecord& record, double upto) {
  require_pure_jump(record, "exact_range");
  check_time(record, upto);
  const std::size_t count = record.jumps_upto(upto);
  const double end = eval_v(record, upto);
  return {std::min(record.prefix_min(count), end),
          std::max(record.prefix_max(count), end)};
}

double exact_sup(const JumpRecord& record, double t) {
  require_pure_jump(record, "exact_sup");
  check_scale(record, t);
  return exact_range(record, t).max / std::sqrt(t);
}

PathGrid build_coupled_path(const JumpRecord& record, double s_l, double s_k,
                            std::size_t m) {
  if (m == 0) throw std::domain_error("grid needs m >= 1");
  if (!(s_l > 0.0)) throw std::domain_error("coupling needs s_l > 0");
  if (!(s_l < s_k)) throw std::domain_error("coupling needs s_l < s_k");
  check_scale(record, s_k);
  const double root = std::sqrt(s_k);
  const double cut = s_l / s_k;
  const double offset = eval_v(record, s_l) / root;
  PathGrid path;
  path.values.assign(m + 1, 0.0);
  for (std::size_t j = 0; j <= m; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(m);
    if (x < cut) continue;
    path.values[j] = eval_v(record, s_k * x) / root - offset;
  }
  return path;
}

std::vector<PathGrid> simulate_wiener(double sigma, std::size_t m,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      unsigned threads) {
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_wiener: sigma must be > 0");
  if (m == 0) throw std::domain_error("grid needs m >= 1");
  if (count == 0) throw std::invalid_argument("simulate_wiener: count must be >= 1");
  std::vector<PathGrid> paths(count);
  const double step_sd = sigma / std::sqrt(static_cast<double>(m));
  parallel_for(count, threads, [&](std::size_t p) {
    Engine rng = make_engine(derive_stream(master_seed, "wiener", p));
    std::normal_distribution<double> gauss(0.0, step_sd);
    auto& values = paths[p].values;
    values.resize(m + 1);
    values[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) values[j] = values[j - 1] + gauss(rng);
  });
  return paths;
}

double estimate_record_bytes(const LevyModel& model, double horizon) {
  // times, sizes, prefix sums and the two running extremes
  double bytes = 5.0 * sizeof(double) * model.poisson_rate() * horizon;
  if (model.diffusion_sd() > 0.0) {
    bytes += sizeof(double) * static_cast<double>(diffusion_cells(horizon) + 1);
  }
  return bytes + 256.0;
}

std::string record_digest(const JumpRecord& record) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::vector<double>& xs) {
    for (double x : xs) {
      char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      h = fnv1a(std::string_view(bytes, sizeof(double)), h);
    }
  };
  feed(record.jump_times());
  feed(record.jump_sizes());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_jump_record_csv(std::ostream& os, const JumpRecord& record) {
  const auto saved = os.precision(17);
  os << "# model: " << record.model().describe()
     << "; horizon=" << record.horizon()
     << "; seed_master=" << record.provenance().master
     << "; seed_stream=" << record.provenance().stream << '\n';
  os << "time,size\n";
  const auto& times = record.jump_times();
  const auto& sizes = record.jump_sizes();
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << times[i] << ',' << sizes[i] << '\n';
  }
  os.precision(saved);
}

}  // namespace levy
