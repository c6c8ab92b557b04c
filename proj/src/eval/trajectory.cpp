#include "driftnav/eval/trajectory.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "driftnav/core/error.hpp"

namespace driftnav::eval {

namespace {

constexpr const char* kHeader = "t,x_gt,y_gt,yaw_gt,x_est,y_est,yaw_est,steer,speed";
constexpr int kFields = 9;

}  // namespace

void write_trajectory_csv(std::ostream& out, std::span<const mdp::EvalSample> samples) {
  out << kHeader << '\n';
  char buf[32];
  auto put = [&](double v, char sep) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
    out.put(sep);
  };
  for (const auto& s : samples) {
    put(s.t, ',');
    put(s.truth.x, ',');
    put(s.truth.y, ',');
    put(s.truth.yaw, ',');
    put(s.estimate.x, ',');
    put(s.estimate.y, ',');
    put(s.estimate.yaw, ',');
    put(s.steer, ',');
    put(s.speed, '\n');
  }
}

std::vector<mdp::EvalSample> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (line != kHeader) throw ParseError("line 1: expected header '" + std::string(kHeader) + "'");
  std::vector<mdp::EvalSample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[kFields];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < kFields; ++i) {
      const auto res = std::from_chars(p, end, v[i]);
      const bool last = i == kFields - 1;
      if (res.ec != std::errc() || (last ? res.ptr != end : (res.ptr == end || *res.ptr != ',')))
        throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(kFields) +
                         " numeric fields");
      p = res.ptr + 1;
    }
    out.push_back({v[0], Pose2D{v[1], v[2], v[3]}, Pose2D{v[4], v[5], v[6]}, v[7], v[8]});
  }
  return out;
}

}  // namespace driftnav::eval
