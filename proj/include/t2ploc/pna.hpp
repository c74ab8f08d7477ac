#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "t2ploc/object.hpp"
#include "t2ploc/taxonomy.hpp"

namespace t2p {

/// Text-object to scene-graph node link. Grounded iff a node is present.
struct Assignment {
  std::string object_label;
  std::optional<int> matched_node;

  bool grounded() const { return matched_node.has_value(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Groundability thresholds on the map/cell centroid distance, meters.
struct TauConfig {
  double object_m = 5.0;
  double stuff_m = 15.0;

  double for_kind(Kind k) const { return k == Kind::Object ? object_m : stuff_m; }
  void validate() const;
};

enum class AssignmentStrategy { Partial, Full };

std::string_view strategy_name(AssignmentStrategy s) noexcept;
AssignmentStrategy parse_strategy(std::string_view s);

/// The map object corresponding to a pose-cell object, or nullptr.
/// Object kind matches on the shared raw instance id; Stuff kind takes the
/// same-label cluster with the nearest centroid (lowest id on ties).
const ObjectInstance* corresponding_object(const ObjectInstance& source, const LocalMap& map);

/// Grounded iff a corresponding map object exists and its in-map centroid
/// is strictly closer than tau(kind) to the source's in-cell centroid.
Assignment groundability(const ObjectInstance& source, const LocalMap& map,
                         const Taxonomy& taxonomy, const TauConfig& tau);

/// One assignment per hint source, in hint order.
std::vector<Assignment> label_query(std::span<const ObjectInstance* const> sources,
                                    const LocalMap& map, const Taxonomy& taxonomy,
                                    const TauConfig& tau);

/// Ablation: every hint is forced onto the nearest same-label node, with
/// no distance threshold. Ungrounded only when the label is absent.
std::vector<Assignment> full_assignment_variant(std::span<const ObjectInstance* const> sources,
                                                const LocalMap& map, const Taxonomy& taxonomy);

}  // namespace t2p
