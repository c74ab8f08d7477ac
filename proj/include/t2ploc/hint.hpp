#pragma once

#include <string>
#include <string_view>

#include "t2ploc/direction.hpp"

namespace t2p {

/// The three slots of a templated hint sentence.
struct HintText {
  Direction direction = Direction::North;
  std::string color;
  std::string semantic;

  friend bool operator==(const HintText&, const HintText&) = default;
};

/// "The pose is <direction> of <color> <semantic>."
std::string render_hint_text(const HintText& h);

/// Inverse of render_hint_text. The color is a single token; the semantic
/// name is the rest of the sentence. Throws Parse.
HintText parse_hint_text(std::string_view text);

}  // namespace t2p
