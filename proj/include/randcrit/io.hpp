#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace randcrit {

// Fixed numeric formatting shared by every CSV writer ("%.12g", '.' decimal
// separator regardless of locale).
std::string format_number(double v);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace randcrit
