#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "driftnav/eval/benchmark.hpp"

namespace driftnav::eval {

/// One row per cell per metric:
/// scenario,arm,lidar_range,metric,seeds,n,mean,std,collisions,lane_breaches,goals,marker
/// mean/std print "undefined" when they do not exist; marker is "collision"
/// for cells with at least one collided run.
void write_table_csv(std::ostream& out, const BenchmarkTable& table);
/// Inverse of write_table_csv. Throws ParseError with line numbers.
BenchmarkTable read_table_csv(std::istream& in);

/// One row per run with its outcome and metrics.
void write_runs_csv(std::ostream& out, std::span<const TrajectoryReport> runs);

/// Summary document: config echo, per-cell stats, improvement factors per
/// cell and per scenario.
std::string summary_json(const BenchmarkTable& table, const std::string& config_json);

struct ReportPaths {
  std::filesystem::path table_csv;
  std::filesystem::path runs_csv;
  std::filesystem::path summary;
};

/// Writes table.csv, runs.csv and summary.json into dir (created if
/// needed). Throws std::invalid_argument for an empty table and IoError
/// naming the path.
ReportPaths emit_report(const BenchmarkResult& result, const std::filesystem::path& dir,
                        const std::string& config_json = "{}");

}  // namespace driftnav::eval
