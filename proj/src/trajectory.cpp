#include "t2ploc/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "t2ploc/error.hpp"

namespace t2p {

Trajectory parse_trajectory(std::istream& in) {
  Trajectory traj;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream row(line);
    std::string xs, ys, extra;
    row >> xs >> ys;
    const std::string where = "trajectory line " + std::to_string(lineno);
    if (ys.empty() || (row >> extra)) {
      throw Error(ErrorCode::Parse, where + ": expected two columns");
    }
    Vec2 pose;
    try {
      std::size_t used = 0;
      pose.x = std::stod(xs, &used);
      if (used != xs.size()) throw std::invalid_argument(xs);
      pose.y = std::stod(ys, &used);
      if (used != ys.size()) throw std::invalid_argument(ys);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, where + ": non-numeric token");
    }
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y)) {
      throw Error(ErrorCode::Parse, where + ": non-finite pose");
    }
    traj.poses.push_back(pose);
  }
  if (traj.poses.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no poses");
  return traj;
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open trajectory " + path.string(), "trajectory");
  return parse_trajectory(in);
}

}  // namespace t2p
