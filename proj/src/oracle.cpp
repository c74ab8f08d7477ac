#include "t2ploc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "t2ploc/error.hpp"

namespace t2p {

void GridConfig::validate(double side_m) const {
  if (!(pitch_m > 0.0) || pitch_m > side_m) {
    throw Error(ErrorCode::InvalidArgument, "grid pitch must be in (0, S]", "localize.grid_pitch_m");
  }
}

namespace {

std::vector<HintText> parse_all(std::span<const std::string> texts) {
  std::vector<HintText> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_hint_text(t));
  return out;
}

// Map objects whose semantic name and palette color match each hint.
std::vector<std::vector<std::size_t>> hint_candidates(std::span<const HintText> hints,
                                                      const LocalMap& map,
                                                      const OracleContext& ctx) {
  std::vector<std::vector<std::size_t>> out(hints.size());
  for (std::size_t k = 0; k < map.objects.size(); ++k) {
    const auto& obj = map.objects[k];
    const auto& name = ctx.taxonomy.at(obj.semantic).name;
    const auto& color = ctx.palette.nearest(obj.mean_color);
    for (std::size_t h = 0; h < hints.size(); ++h) {
      if (hints[h].semantic == name && hints[h].color == color) out[h].push_back(k);
    }
  }
  return out;
}

}  // namespace

int oracle_score(Vec2 candidate, std::span<const HintText> hints, const LocalMap& map,
                 const OracleContext& ctx) {
  const auto matches = hint_candidates(hints, map, ctx);
  int score = 0;
  for (std::size_t h = 0; h < hints.size(); ++h) {
    for (std::size_t k : matches[h]) {
      if (direction_of(candidate, map.objects[k], ctx.delta_m) == hints[h].direction) {
        ++score;
        break;
      }
    }
  }
  return score;
}

int oracle_score(Vec2 candidate, std::span<const std::string> hint_texts, const LocalMap& map,
                 const OracleContext& ctx) {
  const auto hints = parse_all(hint_texts);
  return oracle_score(candidate, hints, map, ctx);
}

ScoreGrid oracle_score_grid(const LocalMap& map, std::span<const HintText> hints, GridConfig grid,
                            const OracleContext& ctx) {
  grid.validate(map.side_m);
  if (!(ctx.delta_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "on-top distance must be positive", "query.delta_m");

  ScoreGrid out;
  out.pitch = grid.pitch_m;
  out.origin = {map.center.x - map.side_m / 2.0, map.center.y - map.side_m / 2.0};
  const int steps = static_cast<int>(std::floor(map.side_m / grid.pitch_m + 1e-9));
  out.nx = out.ny = steps + 1;
  const std::size_t n_cells = static_cast<std::size_t>(out.nx) * out.ny;
  out.scores.assign(n_cells, 0);

  const auto matches = hint_candidates(hints, map, ctx);

  // On-top masks: candidates strictly within delta of some object point.
  // The exact test mirrors direction_of, so results agree bit for bit.
  std::vector<std::vector<char>> on_top(map.objects.size());
  auto index_range = [&](double lo, double hi, double origin, int n) {
    const int a = std::max(0, static_cast<int>(std::floor((lo - origin) / out.pitch)) - 1);
    const int b = std::min(n - 1, static_cast<int>(std::ceil((hi - origin) / out.pitch)) + 1);
    return std::pair{a, b};
  };
  for (const auto& cand : matches) {
    for (std::size_t k : cand) {
      if (!on_top[k].empty()) continue;
      auto& mask = on_top[k];
      mask.assign(n_cells, 0);
      for (const auto& pt : map.objects[k].points) {
        const Vec2 p = pt.p.xy();
        const auto [i0, i1] = index_range(p.x - ctx.delta_m, p.x + ctx.delta_m, out.origin.x, out.nx);
        const auto [j0, j1] = index_range(p.y - ctx.delta_m, p.y + ctx.delta_m, out.origin.y, out.ny);
        for (int j = j0; j <= j1; ++j) {
          for (int i = i0; i <= i1; ++i) {
            auto& m = mask[static_cast<std::size_t>(j) * out.nx + i];
            if (!m && std::sqrt(squared_distance(p, out.point(i, j))) < ctx.delta_m) m = 1;
          }
        }
      }
    }
  }

  for (int j = 0; j < out.ny; ++j) {
    for (int i = 0; i < out.nx; ++i) {
      const std::size_t cell = static_cast<std::size_t>(j) * out.nx + i;
      const Vec2 c = out.point(i, j);
      int score = 0;
      for (std::size_t h = 0; h < hints.size(); ++h) {
        for (std::size_t k : matches[h]) {
          const auto& obj = map.objects[k];
          const Direction d = on_top[k][cell] ? Direction::OnTop
                                              : classify_offset(obj.centroid.x - c.x, obj.centroid.y - c.y);
          if (d == hints[h].direction) {
            ++score;
            break;
          }
        }
      }
      out.scores[cell] = score;
      out.max_score = std::max(out.max_score, score);
    }
  }
  return out;
}

LocalizationResult oracle_localize(const std::string& query_id, const LocalMap& map,
                                   std::span<const std::string> hint_texts, GridConfig grid,
                                   const GeoReference& georef, const OracleContext& ctx) {
  const auto hints = parse_all(hint_texts);
  const ScoreGrid scores = oracle_score_grid(map, hints, grid, ctx);

  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < scores.ny; ++j) {
    for (int i = 0; i < scores.nx; ++i) {
      if (scores.at(i, j) != scores.max_score) continue;
      const Vec2 p = scores.point(i, j);
      sx += p.x;
      sy += p.y;
      ++count;
    }
  }
  const Vec2 centroid{sx / count, sy / count};

  Vec2 representative = centroid;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < scores.ny; ++j) {
    for (int i = 0; i < scores.nx; ++i) {
      if (scores.at(i, j) != scores.max_score) continue;
      const double d2 = squared_distance(scores.point(i, j), centroid);
      if (d2 < best) {
        best = d2;
        representative = scores.point(i, j);
      }
    }
  }

  LocalizationResult result;
  result.query_id = query_id;
  result.method = Method::Oracle;
  result.ok = true;
  result.attempts = 1;
  result.predicted_pixel = world_to_pixel(centroid, georef).pixel;
  result.predicted_world = centroid;

  const auto matches = hint_candidates(hints, map, ctx);
  for (std::size_t h = 0; h < hints.size(); ++h) {
    Assignment a{hints[h].semantic, std::nullopt};
    for (std::size_t k : matches[h]) {
      if (direction_of(representative, map.objects[k], ctx.delta_m) == hints[h].direction) {
        a.matched_node = map.objects[k].id;
        break;
      }
    }
    result.assignments.push_back(std::move(a));
  }
  return result;
}

}  // namespace t2p
