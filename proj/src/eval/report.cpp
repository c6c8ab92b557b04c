#include "driftnav/eval/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "driftnav/core/error.hpp"

namespace driftnav::eval {

namespace {

using nlohmann::json;

constexpr const char* kTableHeader =
    "scenario,arm,lidar_range,metric,seeds,n,mean,std,collisions,lane_breaches,goals,marker";
constexpr const char* kUndefined = "undefined";

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  return v;
}

json stat_json(const Stat& s) {
  json j{{"n", s.n}};
  j["mean"] = s.n > 0 ? json(s.mean) : json(nullptr);
  j["std"] = s.std ? json(*s.std) : json(nullptr);
  return j;
}

json optional_json(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void write_table_csv(std::ostream& out, const BenchmarkTable& table) {
  out << kTableHeader << '\n';
  for (const auto& c : table.cells) {
    for (Metric m : kAllMetrics) {
      const Stat& s = c.stat(m);
      out << c.scenario << ',' << to_string(c.arm) << ',' << num(c.lidar_range) << ',' << to_string(m) << ','
          << c.seeds << ',' << s.n << ',' << (s.n > 0 ? num(s.mean) : kUndefined) << ','
          << (s.std ? num(*s.std) : kUndefined) << ',' << c.collisions << ',' << c.lane_breaches << ',' << c.goals
          << ',' << (c.collisions > 0 ? "collision" : "") << '\n';
    }
  }
}

BenchmarkTable read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) throw ParseError("line 1: unexpected table header");
  BenchmarkTable table;
  std::map<std::tuple<std::string, int, double>, std::size_t> index;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 12) throw ParseError("line " + std::to_string(line_no) + ": expected 12 fields");
    Arm arm;
    Metric metric;
    try {
      arm = parse_arm(f[1]);
      metric = parse_metric(f[3]);
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const double range = parse_double(f[2], line_no);
    const auto key = std::make_tuple(f[0], static_cast<int>(arm), range);
    auto it = index.find(key);
    if (it == index.end()) {
      BenchmarkCell cell;
      cell.scenario = f[0];
      cell.arm = arm;
      cell.lidar_range = range;
      cell.seeds = parse_int(f[4], line_no);
      cell.collisions = parse_int(f[8], line_no);
      cell.lane_breaches = parse_int(f[9], line_no);
      cell.goals = parse_int(f[10], line_no);
      table.cells.push_back(cell);
      it = index.emplace(key, table.cells.size() - 1).first;
    }
    Stat& s = table.cells[it->second].stat(metric);
    s.n = parse_int(f[5], line_no);
    s.mean = f[6] == kUndefined ? 0.0 : parse_double(f[6], line_no);
    s.std = f[7] == kUndefined ? std::nullopt : std::optional<double>(parse_double(f[7], line_no));
  }
  return table;
}

void write_runs_csv(std::ostream& out, std::span<const TrajectoryReport> runs) {
  out << "scenario,arm,lidar_range,seed,outcome,collided,lane_breach,goal_reached,duration,distance,"
         "average_drift,final_drift,rotational_offset\n";
  for (const auto& r : runs) {
    std::string outcome = r.outcome;
    for (char& ch : outcome)
      if (ch == ',' || ch == '\n') ch = ';';
    out << r.scenario << ',' << to_string(r.arm) << ',' << num(r.lidar_range) << ',' << r.seed << ',' << outcome
        << ',' << r.collided << ',' << r.lane_breach << ',' << r.goal_reached << ',' << num(r.duration) << ','
        << num(r.distance);
    if (r.metrics)
      out << ',' << num(r.metrics->average_drift) << ',' << num(r.metrics->final_drift) << ','
          << num(r.metrics->rotational_offset);
    else
      out << ",,,";
    out << '\n';
  }
}

std::string summary_json(const BenchmarkTable& table, const std::string& config_json) {
  json doc;
  doc["config"] = json::parse(config_json);
  json cells = json::array();
  for (const auto& c : table.cells) {
    json j{{"scenario", c.scenario},     {"arm", to_string(c.arm)},        {"lidar_range", c.lidar_range},
           {"seeds", c.seeds},           {"collisions", c.collisions},     {"lane_breaches", c.lane_breaches},
           {"goals", c.goals},           {"collision_marker", c.collisions > 0}};
    for (Metric m : kAllMetrics) j[std::string(to_string(m))] = stat_json(c.stat(m));
    if (is_ladfn(c.arm)) j["improvement_factor"] = optional_json(improvement_factor(table, c.scenario, c.lidar_range, c.arm));
    cells.push_back(std::move(j));
  }
  doc["cells"] = std::move(cells);
  json scenarios = json::array();
  for (const auto& name : table.scenarios()) {
    json j{{"scenario", name}};
    for (Arm arm : kAllArms) {
      const auto mean = scenario_mean(table, name, arm);
      if (mean) j["average_drift_mean"][std::string(to_string(arm))] = *mean;
    }
    j["improvement_factor"]["ladfn"] = optional_json(scenario_improvement(table, name, Arm::Ladfn));
    j["improvement_factor"]["ladfn+f"] = optional_json(scenario_improvement(table, name, Arm::LadfnFiltered));
    scenarios.push_back(std::move(j));
  }
  doc["scenarios"] = std::move(scenarios);
  return doc.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

ReportPaths emit_report(const BenchmarkResult& result, const std::filesystem::path& dir,
                        const std::string& config_json) {
  if (result.table.cells.empty()) throw std::invalid_argument("benchmark table is empty");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  ReportPaths paths{dir / "table.csv", dir / "runs.csv", dir / "summary.json"};
  std::ostringstream table, runs;
  write_table_csv(table, result.table);
  write_runs_csv(runs, result.runs);
  write_file(paths.table_csv, table.str());
  write_file(paths.runs_csv, runs.str());
  write_file(paths.summary, summary_json(result.table, config_json));
  return paths;
}

}  // namespace driftnav::eval
