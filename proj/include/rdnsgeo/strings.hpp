#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rdnsgeo {

std::string to_lower_ascii(std::string_view s);

bool is_all_digits(std::string_view s);

// Splits on a single separator; empty fields are preserved.
std::vector<std::string> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

// Lowercases ASCII letters, keeps digits and non-ASCII bytes, drops
// everything else (spaces, punctuation). Used to turn place names into
// hostname-shaped lookup keys: "Frankfurt am Main" -> "frankfurtammain".
std::string normalize_key(std::string_view s);

// Number of Unicode code points in a UTF-8 string. Invalid bytes count as
// one code point each so the result is always defined.
std::size_t utf8_length(std::string_view s);

// Appends a code point to a UTF-8 string.
void utf8_append(std::string& out, char32_t cp);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace rdnsgeo
