#include <doctest.h>

#include "rdnsgeo/idna.hpp"
#include "rdnsgeo/strings.hpp"

using namespace rdnsgeo;

TEST_CASE("punycode_decode known labels") {
  auto hk = punycode_decode("j6w193g");
  REQUIRE(hk.has_value());
  std::string hk8;
  for (char32_t c : *hk) utf8_append(hk8, c);
  CHECK(hk8 == "\xe9\xa6\x99\xe6\xb8\xaf");  // 香港

  auto hula = punycode_decode("0rsod70av79j");
  REQUIRE(hula.has_value());
  std::string hula8;
  for (char32_t c : *hula) utf8_append(hula8, c);
  CHECK(hula8 == "\xe5\xa4\x8f\xe5\xa8\x81\xe5\xa4\xb7\xe8\x88\x9e");  // 夏威夷舞
}

TEST_CASE("punycode_decode greek sample") {
  auto v = punycode_decode("nxasmq6b");
  REQUIRE(v.has_value());
  std::string s;
  for (char32_t c : *v) utf8_append(s, c);
  CHECK(s == "\xce\xb2\xcf\x8c\xce\xbb\xce\xbf\xcf\x83");  // βόλοσ
}

TEST_CASE("punycode_decode mixed ascii and extended") {
  // "bcher-kva" decodes to "bücher".
  auto v = punycode_decode("bcher-kva");
  REQUIRE(v.has_value());
  std::string s;
  for (char32_t c : *v) utf8_append(s, c);
  CHECK(s == "b\xc3\xbc"
             "cher");
}

TEST_CASE("punycode_decode rejects malformed input") {
  CHECK_FALSE(punycode_decode("!!!").has_value());
  // Truncated variable-length integer.
  CHECK_FALSE(punycode_decode("a-b").has_value());
}

TEST_CASE("punycode_decode of an empty string is empty") {
  auto v = punycode_decode("");
  REQUIRE(v.has_value());
  CHECK(v->empty());
}

TEST_CASE("to_unicode_label converts ACE labels") {
  CHECK(to_unicode_label("xn--j6w193g") == "\xe9\xa6\x99\xe6\xb8\xaf");
  CHECK(to_unicode_label("xn--0rsod70av79j") == "\xe5\xa4\x8f\xe5\xa8\x81\xe5\xa4\xb7\xe8\x88\x9e");
}

TEST_CASE("to_unicode_label passes plain labels through") {
  CHECK(to_unicode_label("seattle") == "seattle");
  CHECK(to_unicode_label("") == "");
  CHECK(to_unicode_label("sea-ttle01") == "sea-ttle01");
}

TEST_CASE("to_unicode_label keeps undecodable ACE labels as-is") {
  CHECK(to_unicode_label("xn--!!!") == "xn--!!!");
  CHECK(to_unicode_label("xn--") == "xn--");
}

TEST_CASE("case folding happens at the hostname level") {
  // Labels are matched against the lowercase ACE prefix only; hostnames are
  // lowercased before splitting into labels.
  CHECK(to_unicode_label("XN--j6w193g") == "XN--j6w193g");
  CHECK(to_unicode_hostname("XN--j6w193g") == "\xe9\xa6\x99\xe6\xb8\xaf");
}

TEST_CASE("to_unicode_hostname converts per label") {
  CHECK(to_unicode_hostname("xn--0rsod70av79j.xn--j6w193g") ==
        "\xe5\xa4\x8f\xe5\xa8\x81\xe5\xa4\xb7\xe8\x88\x9e.\xe9\xa6\x99\xe6\xb8\xaf");
  CHECK(to_unicode_hostname("www.example.com") == "www.example.com");
  CHECK(to_unicode_hostname("a.xn--j6w193g.b") == "a.\xe9\xa6\x99\xe6\xb8\xaf.b");
}

TEST_CASE("to_unicode_hostname preserves label structure") {
  std::string h = "xn--j6w193g.xn--j6w193g";
  std::string u = to_unicode_hostname(h);
  CHECK(u == "\xe9\xa6\x99\xe6\xb8\xaf.\xe9\xa6\x99\xe6\xb8\xaf");
}
