#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visrec {

/// Standard alphabet with '=' padding, no line breaks.
std::string b64_encode(std::span<const std::uint8_t> bytes);

/// Accepts line-wrapped input (CR/LF are skipped). Throws invalid_base64 on
/// characters outside the alphabet or bad padding.
std::vector<std::uint8_t> b64_decode(std::string_view text);

}  // namespace visrec
