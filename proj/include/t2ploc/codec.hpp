#pragma once

#include <string>
#include <string_view>

namespace t2p {

std::string base64_encode(std::string_view bytes);
/// Throws Parse on malformed input.
std::string base64_decode(std::string_view text);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace t2p
