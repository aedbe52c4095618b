#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nanorace/analysis.hpp"
#include "nanorace/dataset.hpp"
#include "nanorace/error.hpp"
#include "nanorace/vehicle.hpp"

namespace nanorace {

// Compact float formatting for time series.
inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Round-trip-exact formatting for metric values that get re-read.
inline std::string fmt_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out << text;
}

inline const char* kRunCsvHeader =
    "t,x,y,yaw,x_est,y_est,yaw_est,p_left,p_center,p_right,speed,yaw_rate,mode\n";

inline std::string run_csv(const RunRecord& rec) {
  std::string out = kRunCsvHeader;
  out.reserve(rec.rows.size() * 96);
  for (const auto& r : rec.rows) {
    out += fmt_g(r.t);
    out += ',';
    out += fmt_g(r.truth.pos.x);
    out += ',';
    out += fmt_g(r.truth.pos.y);
    out += ',';
    out += fmt_g(r.truth.yaw);
    out += ',';
    out += fmt_g(r.est.pos.x);
    out += ',';
    out += fmt_g(r.est.pos.y);
    out += ',';
    out += fmt_g(r.est.yaw);
    out += ',';
    out += fmt_g(r.probs.left);
    out += ',';
    out += fmt_g(r.probs.center);
    out += ',';
    out += fmt_g(r.probs.right);
    out += ',';
    out += fmt_g(r.setpoint.forward_speed);
    out += ',';
    out += fmt_g(r.setpoint.yaw_rate);
    out += ',';
    out += mode_name(r.mode);
    out += '\n';
  }
  return out;
}

inline std::string events_csv(const RunRecord& rec) {
  std::string out = "t,event,detail\n";
  for (const auto& e : rec.events) {
    out += fmt_g(e.t);
    out += ',';
    out += event_kind_name(e.kind);
    out += ',';
    out += e.detail;
    out += '\n';
  }
  return out;
}

inline std::string poses_csv(const std::vector<PoseSample>& poses) {
  std::string out = "x,y,z,yaw,pitch,roll,group,split\n";
  out.reserve(poses.size() * 80);
  for (const auto& p : poses) {
    out += fmt_g(p.x);
    out += ',';
    out += fmt_g(p.y);
    out += ',';
    out += fmt_g(p.z);
    out += ',';
    out += fmt_g(p.yaw);
    out += ',';
    out += fmt_g(p.pitch);
    out += ',';
    out += fmt_g(p.roll);
    out += ',';
    out += std::to_string(static_cast<int>(p.group));
    out += ',';
    out += split_name(p.split);
    out += '\n';
  }
  return out;
}

inline std::string margins_csv(const MarginStats& stats) {
  std::string out = "realization,margin";
  for (const double thr : stats.thresholds) {
    out += ",time_outside_" + fmt_g(thr) + "m,crossings_" + fmt_g(thr) + "m";
  }
  out += '\n';
  for (std::size_t r = 0; r < stats.margins.size(); ++r) {
    out += std::to_string(r);
    out += ',';
    out += fmt_exact(stats.margins[r]);
    for (std::size_t ti = 0; ti < stats.thresholds.size(); ++ti) {
      out += ',';
      out += fmt_exact(stats.time_outside[ti][r]);
      out += ',';
      out += std::to_string(stats.crossings[ti][r]);
    }
    out += '\n';
  }
  return out;
}

inline std::string trajectory_csv(const std::vector<Pose2>& traj, double dt) {
  std::string out = "t,x,y,yaw\n";
  out.reserve(traj.size() * 48);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += fmt_g(i * dt);
    out += ',';
    out += fmt_g(traj[i].pos.x);
    out += ',';
    out += fmt_g(traj[i].pos.y);
    out += ',';
    out += fmt_g(traj[i].yaw);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace detail

// Reads a trajectory from CSV with a header naming at least x and y columns
// (yaw optional; anything else ignored).
inline std::vector<Pose2> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::bad_config, "empty trajectory CSV");
  const auto header = detail::split_csv_line(line);
  int ix = -1, iy = -1, iyaw = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") ix = static_cast<int>(i);
    if (header[i] == "y") iy = static_cast<int>(i);
    if (header[i] == "yaw") iyaw = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0)
    fail(ErrorCode::bad_config, "trajectory CSV needs x and y columns");
  std::vector<Pose2> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (static_cast<int>(cells.size()) <= std::max(ix, std::max(iy, iyaw)))
      fail(ErrorCode::bad_config, "short row in trajectory CSV");
    Pose2 p;
    try {
      p.pos.x = std::stod(cells[ix]);
      p.pos.y = std::stod(cells[iy]);
      if (iyaw >= 0) p.yaw = std::stod(cells[iyaw]);
    } catch (const std::exception&) {
      fail(ErrorCode::bad_config, "non-numeric value in trajectory CSV");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace nanorace
