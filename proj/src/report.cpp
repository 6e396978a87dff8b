#include "levy/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levy {

Check Check::make(std::string name, double statistic, Relation relation,
                  double threshold, std::vector<std::uint64_t> seeds) {
  Check c;
  c.name = std::move(name);
  c.statistic = statistic;
  c.threshold = threshold;
  c.relation = relation;
  c.seeds = std::move(seeds);
  switch (relation) {
    case Relation::less: c.pass = statistic < threshold; break;
    case Relation::less_equal: c.pass = statistic <= threshold; break;
    case Relation::greater: c.pass = statistic > threshold; break;
  }
  return c;
}

std::string to_string(Check::Relation r) {
  switch (r) {
    case Check::Relation::less: return "<";
    case Check::Relation::less_equal: return "<=";
    case Check::Relation::greater: return ">";
  }
  return "?";
}

bool TheoremReport::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Check& TheoremReport::add(Check check) {
  checks.push_back(std::move(check));
  return checks.back();
}

const Check* TheoremReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::ordered_json to_json(const TheoremReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["theorem"] = report.theorem;
  j["passed"] = report.passed();
  j["config"] = report.config;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["statistic"] = c.statistic;
    cj["relation"] = to_string(c.relation);
    cj["threshold"] = c.threshold;
    cj["pass"] = c.pass;
    cj["seeds"] = c.seeds;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["data"] = report.data;
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

std::string to_csv(const TheoremReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "check,statistic,threshold,relation,verdict\n";
  for (const auto& c : report.checks) {
    os << c.name << ',' << c.statistic << ',' << c.threshold << ','
       << to_string(c.relation) << ',' << (c.pass ? "pass" : "fail") << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace levy
