#include "rdnsgeo/idna.hpp"

#include <cstdint>
#include <limits>

#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

constexpr std::uint32_t kBase = 36;
constexpr std::uint32_t kTmin = 1;
constexpr std::uint32_t kTmax = 26;
constexpr std::uint32_t kSkew = 38;
constexpr std::uint32_t kDamp = 700;
constexpr std::uint32_t kInitialBias = 72;
constexpr std::uint32_t kInitialN = 128;
constexpr std::uint32_t kMaxInt = 0x7FFFFFFF;

std::optional<std::uint32_t> decode_digit(char c) {
  if (c >= 'a' && c <= 'z') return static_cast<std::uint32_t>(c - 'a');
  if (c >= 'A' && c <= 'Z') return static_cast<std::uint32_t>(c - 'A');
  if (c >= '0' && c <= '9') return static_cast<std::uint32_t>(c - '0') + 26;
  return std::nullopt;
}

std::uint32_t adapt(std::uint32_t delta, std::uint32_t numpoints, bool firsttime) {
  delta = firsttime ? delta / kDamp : delta / 2;
  delta += delta / numpoints;
  std::uint32_t k = 0;
  while (delta > ((kBase - kTmin) * kTmax) / 2) {
    delta /= kBase - kTmin;
    k += kBase;
  }
  return k + (((kBase - kTmin + 1) * delta) / (delta + kSkew));
}

}  // namespace

std::optional<std::u32string> punycode_decode(std::string_view encoded) {
  std::u32string output;
  std::size_t in_pos = 0;
  std::size_t delim = encoded.rfind('-');
  if (delim != std::string_view::npos) {
    for (std::size_t j = 0; j < delim; ++j) {
      unsigned char c = static_cast<unsigned char>(encoded[j]);
      if (c >= 0x80) return std::nullopt;
      output.push_back(static_cast<char32_t>(c));
    }
    in_pos = delim + 1;
  }

  std::uint32_t n = kInitialN;
  std::uint32_t i = 0;
  std::uint32_t bias = kInitialBias;

  while (in_pos < encoded.size()) {
    std::uint32_t oldi = i;
    std::uint32_t w = 1;
    for (std::uint32_t k = kBase;; k += kBase) {
      if (in_pos >= encoded.size()) return std::nullopt;
      auto digit = decode_digit(encoded[in_pos++]);
      if (!digit) return std::nullopt;
      if (*digit > (kMaxInt - i) / w) return std::nullopt;
      i += *digit * w;
      std::uint32_t t = k <= bias ? kTmin : (k >= bias + kTmax ? kTmax : k - bias);
      if (*digit < t) break;
      if (w > kMaxInt / (kBase - t)) return std::nullopt;
      w *= kBase - t;
    }
    std::uint32_t out_len = static_cast<std::uint32_t>(output.size()) + 1;
    bias = adapt(i - oldi, out_len, oldi == 0);
    if (i / out_len > kMaxInt - n) return std::nullopt;
    n += i / out_len;
    i %= out_len;
    if (n > 0x10FFFF || (n >= 0xD800 && n <= 0xDFFF)) return std::nullopt;
    output.insert(output.begin() + i, static_cast<char32_t>(n));
    ++i;
  }
  return output;
}

std::string to_unicode_label(std::string_view label) {
  if (label.size() < 4 || label.substr(0, 4) != "xn--") return std::string(label);
  auto decoded = punycode_decode(label.substr(4));
  if (!decoded || decoded->empty()) return std::string(label);
  std::string utf8;
  for (char32_t cp : *decoded) utf8_append(utf8, cp);
  return utf8;
}

std::string to_unicode_hostname(std::string_view hostname) {
  std::string lower = to_lower_ascii(hostname);
  std::string out;
  out.reserve(lower.size());
  for (std::size_t start = 0; start <= lower.size();) {
    std::size_t dot = lower.find('.', start);
    std::size_t end = dot == std::string::npos ? lower.size() : dot;
    if (!out.empty() || start > 0) out.push_back('.');
    out += to_unicode_label(std::string_view(lower).substr(start, end - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

}  // namespace rdnsgeo
