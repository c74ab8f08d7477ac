#include "t2ploc/hint.hpp"

#include "t2ploc/error.hpp"

namespace t2p {

namespace {
constexpr std::string_view kPrefix = "The pose is ";
constexpr std::string_view kOf = " of ";
}  // namespace

std::string render_hint_text(const HintText& h) {
  std::string out(kPrefix);
  out += direction_word(h.direction);
  out += kOf;
  out += h.color;
  out += ' ';
  out += h.semantic;
  out += '.';
  return out;
}

HintText parse_hint_text(std::string_view text) {
  auto fail = [&](const char* why) {
    return Error(ErrorCode::Parse, std::string("hint '") + std::string(text) + "': " + why);
  };
  if (!text.starts_with(kPrefix) || !text.ends_with('.')) throw fail("does not match the template");
  std::string_view body = text.substr(kPrefix.size(), text.size() - kPrefix.size() - 1);

  const auto of = body.find(kOf);
  if (of == std::string_view::npos) throw fail("missing 'of'");
  HintText h;
  h.direction = parse_direction(body.substr(0, of));

  const std::string_view rest = body.substr(of + kOf.size());
  const auto space = rest.find(' ');
  if (space == std::string_view::npos || space == 0 || space + 1 >= rest.size()) {
    throw fail("expected '<color> <semantic>'");
  }
  h.color = std::string(rest.substr(0, space));
  h.semantic = std::string(rest.substr(space + 1));
  return h;
}

}  // namespace t2p
