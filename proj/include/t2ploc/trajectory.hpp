#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "t2ploc/geometry.hpp"

namespace t2p {

struct Trajectory {
  std::vector<Vec2> poses;
};

/// One `x y` pose per line; blank lines and '#' comments are skipped.
/// Throws Parse on bad tokens and EmptyTrajectory when no pose is present.
Trajectory load_trajectory(const std::filesystem::path& path);
Trajectory parse_trajectory(std::istream& in);

}  // namespace t2p
