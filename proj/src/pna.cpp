#include "t2ploc/pna.hpp"

#include <cmath>

#include "t2ploc/error.hpp"

namespace t2p {

void TauConfig::validate() const {
  if (!(object_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive", "pna.tau_object");
  if (!(stuff_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive", "pna.tau_stuff");
}

std::string_view strategy_name(AssignmentStrategy s) noexcept {
  return s == AssignmentStrategy::Partial ? "partial" : "full";
}

AssignmentStrategy parse_strategy(std::string_view s) {
  if (s == "partial") return AssignmentStrategy::Partial;
  if (s == "full") return AssignmentStrategy::Full;
  throw Error(ErrorCode::InvalidArgument, "strategy must be 'partial' or 'full'", "strategy");
}

namespace {

const ObjectInstance* nearest_same_label(const ObjectInstance& source, const LocalMap& map,
                                         bool same_kind_only) {
  const ObjectInstance* best = nullptr;
  double best_d2 = INFINITY;
  for (const auto& obj : map.objects) {
    if (obj.semantic != source.semantic) continue;
    if (same_kind_only && obj.kind != source.kind) continue;
    const double d2 = squared_distance(obj.centroid, source.centroid);
    if (d2 < best_d2 || (d2 == best_d2 && best && obj.id < best->id)) {
      best_d2 = d2;
      best = &obj;
    }
  }
  return best;
}

}  // namespace

const ObjectInstance* corresponding_object(const ObjectInstance& source, const LocalMap& map) {
  if (source.kind == Kind::Stuff) return nearest_same_label(source, map, true);
  for (const auto& obj : map.objects) {
    if (obj.kind == Kind::Object && obj.semantic == source.semantic &&
        obj.source_id == source.source_id) {
      return &obj;
    }
  }
  return nullptr;
}

Assignment groundability(const ObjectInstance& source, const LocalMap& map,
                         const Taxonomy& taxonomy, const TauConfig& tau) {
  Assignment a{taxonomy.at(source.semantic).name, std::nullopt};
  if (const auto* match = corresponding_object(source, map)) {
    if (distance(match->centroid, source.centroid) < tau.for_kind(source.kind)) {
      a.matched_node = match->id;
    }
  }
  return a;
}

std::vector<Assignment> label_query(std::span<const ObjectInstance* const> sources,
                                    const LocalMap& map, const Taxonomy& taxonomy,
                                    const TauConfig& tau) {
  tau.validate();
  std::vector<Assignment> out;
  out.reserve(sources.size());
  for (const auto* src : sources) out.push_back(groundability(*src, map, taxonomy, tau));
  return out;
}

std::vector<Assignment> full_assignment_variant(std::span<const ObjectInstance* const> sources,
                                                const LocalMap& map, const Taxonomy& taxonomy) {
  std::vector<Assignment> out;
  out.reserve(sources.size());
  for (const auto* src : sources) {
    Assignment a{taxonomy.at(src->semantic).name, std::nullopt};
    if (const auto* node = nearest_same_label(*src, map, false)) a.matched_node = node->id;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace t2p
