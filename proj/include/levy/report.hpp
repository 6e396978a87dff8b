#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace levy {

inline constexpr int kReportSchemaVersion = 1;

/// One statistic compared against its threshold.
struct Check {
  enum class Relation { less, less_equal, greater };

  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::less;
  bool pass = false;
  std::vector<std::uint64_t> seeds;  // master seeds that produced the statistic
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  static Check make(std::string name, double statistic, Relation relation,
                    double threshold, std::vector<std::uint64_t> seeds);
};

std::string to_string(Check::Relation r);

struct TheoremReport {
  std::string theorem;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  double wall_clock_seconds = 0.0;

  bool passed() const;
  Check& add(Check check);
  const Check* find(const std::string& name) const;
};

/// Canonical field order; `wall_clock_seconds` is the only nondeterministic
/// field.
nlohmann::ordered_json to_json(const TheoremReport& report);
/// Flat table: check,statistic,threshold,relation,verdict.
std::string to_csv(const TheoremReport& report);

/// Writes `content` to `path` via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace levy
