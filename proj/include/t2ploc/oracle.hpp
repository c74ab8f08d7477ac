#pragma once

#include <span>
#include <string>
#include <vector>

#include "t2ploc/hint.hpp"
#include "t2ploc/localization.hpp"
#include "t2ploc/object.hpp"
#include "t2ploc/palette.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

struct GridConfig {
  double pitch_m = 0.5;

  void validate(double side_m) const;
};

/// Shared inputs of the constraint-grid solver.
struct OracleContext {
  const Taxonomy& taxonomy;
  const ColorPalette& palette;
  double delta_m = kDefaultOnTopDistance;
};

/// Number of hints satisfied at `candidate`: a hint counts when some map
/// object has its semantic name, its palette color, and its direction as
/// seen from the candidate.
int oracle_score(Vec2 candidate, std::span<const HintText> hints, const LocalMap& map,
                 const OracleContext& ctx);
/// Parses each hint sentence first; throws Parse on a malformed one.
int oracle_score(Vec2 candidate, std::span<const std::string> hint_texts, const LocalMap& map,
                 const OracleContext& ctx);

/// Scores on the closed window grid x = cx - S/2 + i * pitch (same for y).
struct ScoreGrid {
  Vec2 origin;  // south-west candidate
  double pitch = 0.5;
  int nx = 0;
  int ny = 0;
  std::vector<int> scores;  // row-major, j (north) outer
  int max_score = 0;

  Vec2 point(int i, int j) const { return {origin.x + i * pitch, origin.y + j * pitch}; }
  int at(int i, int j) const { return scores[static_cast<std::size_t>(j) * nx + i]; }
};

ScoreGrid oracle_score_grid(const LocalMap& map, std::span<const HintText> hints, GridConfig grid,
                            const OracleContext& ctx);

/// Prediction = centroid of every grid candidate attaining the maximum
/// score. Each hint is assigned to the lowest-id object satisfying it at
/// the argmax candidate closest to that centroid.
LocalizationResult oracle_localize(const std::string& query_id, const LocalMap& map,
                                   std::span<const std::string> hint_texts, GridConfig grid,
                                   const GeoReference& georef, const OracleContext& ctx);

}  // namespace t2p
