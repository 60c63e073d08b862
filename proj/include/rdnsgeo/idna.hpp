#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rdnsgeo {

// Decodes the part of an ACE label after the "xn--" prefix. Returns nullopt
// on any malformed input (bad digit, overflow, code point out of range).
std::optional<std::u32string> punycode_decode(std::string_view encoded);

// Converts one lowercase hostname label to its Unicode form. Labels that do
// not start with "xn--" come back unchanged, as do labels whose Punycode
// part fails to decode.
std::string to_unicode_label(std::string_view label);

// Lowercases the hostname and converts each ACE label to Unicode (UTF-8).
std::string to_unicode_hostname(std::string_view hostname);

}  // namespace rdnsgeo
