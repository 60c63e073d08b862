#include "rdnsgeo/splitter.hpp"

#include <algorithm>
#include <fstream>

#include "rdnsgeo/idna.hpp"
#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

const char* const kDefaultBlacklist[] = {
    "dsl",  "fiber",   "nas",  "static", "dynamic", "pool", "pools", "cpe",
    "dhcp", "adsl",    "cable", "host",   "ip",      "res",  "biz",   "mta",
};

bool is_letter_or_digit(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_digit_byte(unsigned char c) { return c >= '0' && c <= '9'; }

// Splits a term at letter/digit boundaries; bytes >= 0x80 count as letters.
std::vector<std::string> split_transitions(const std::string& term) {
  std::vector<std::string> out;
  std::string cur;
  bool cur_digit = false;
  for (unsigned char c : term) {
    bool digit = is_digit_byte(c);
    if (!cur.empty() && digit != cur_digit) {
      out.push_back(cur);
      cur.clear();
    }
    cur.push_back(static_cast<char>(c));
    cur_digit = digit;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Empty when the hostname is well-formed, otherwise the violated rule.
std::string hostname_violation(std::string_view hostname) {
  if (hostname.empty()) return "hostname is empty";
  if (hostname.size() > 253) return "hostname longer than 253 characters";
  std::size_t label_start = 0;
  for (std::size_t i = 0; i <= hostname.size(); ++i) {
    if (i == hostname.size() || hostname[i] == '.') {
      std::size_t len = i - label_start;
      if (len == 0) return "empty label";
      if (len > 63) return "label longer than 63 characters";
      if (hostname[label_start] == '-') return "label starts with a hyphen";
      if (hostname[i - 1] == '-') return "label ends with a hyphen";
      label_start = i + 1;
    } else if (!is_letter_or_digit(static_cast<unsigned char>(hostname[i])) &&
               hostname[i] != '-') {
      return "label contains a character outside letters, digits and hyphens";
    }
  }
  return {};
}

}  // namespace

TermBlacklist TermBlacklist::defaults() {
  TermBlacklist bl;
  for (const char* term : kDefaultBlacklist) bl.add(term);
  return bl;
}

TermBlacklist TermBlacklist::load(std::istream& in) {
  TermBlacklist bl;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = trim(line);
    if (v.empty() || v[0] == '#') continue;
    bl.add(to_lower_ascii(v));
  }
  return bl;
}

TermBlacklist TermBlacklist::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open blacklist file: " + path);
  return load(in);
}

void TermBlacklist::add(std::string_view term) {
  if (!term.empty()) terms_.insert(to_lower_ascii(term));
}

bool TermBlacklist::contains(std::string_view term) const {
  return terms_.count(std::string(term)) > 0;
}

std::vector<std::string> TermBlacklist::sorted_terms() const {
  std::vector<std::string> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SplitHostname::pruned_term_strings() const {
  std::vector<std::string> out;
  out.reserve(pruned_terms.size());
  for (const auto& t : pruned_terms) out.push_back(t.term);
  return out;
}

bool validate_hostname(std::string_view hostname, const SuffixSet& suffixes) {
  if (!hostname_violation(to_lower_ascii(hostname)).empty()) return false;
  std::string unicode = to_unicode_hostname(hostname);
  return suffixes.registrable_domain(unicode).has_value();
}

SplitHostname split_hostname(std::string_view hostname, const SuffixSet& suffixes,
                             const TermBlacklist& blacklist) {
  std::string lower = to_lower_ascii(hostname);
  std::string violation = hostname_violation(lower);
  if (!violation.empty()) throw SplitError(violation);

  SplitHostname out;
  out.raw = std::string(hostname);
  out.unicode_form = to_unicode_hostname(lower);

  SuffixSet::Match m = suffixes.match(out.unicode_form);
  auto domain = suffixes.registrable_domain(out.unicode_form);
  if (!m.from_rule || !domain) throw SplitError("hostname has no known public suffix");
  out.public_suffix = m.suffix;
  out.domain = *domain;

  std::size_t last_dot = out.unicode_form.rfind('.');
  out.tld = "." + (last_dot == std::string::npos ? out.unicode_form
                                                 : out.unicode_form.substr(last_dot + 1));

  if (out.unicode_form.size() > out.domain.size()) {
    out.subdomain =
        out.unicode_form.substr(0, out.unicode_form.size() - out.domain.size() - 1);
  }

  if (!out.subdomain.empty()) {
    out.level1 = split(out.subdomain, '.');
    for (const std::string& t : out.level1) {
      for (auto& part : split(t, '-')) {
        if (!part.empty()) out.level2.push_back(std::move(part));
      }
    }
    for (const std::string& t : out.level2) {
      for (auto& part : split_transitions(t)) out.level3.push_back(std::move(part));
    }
  }

  std::unordered_set<std::string> seen;
  auto add_pruned = [&](const std::vector<std::string>& terms, int level) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string& term = terms[i];
      if (term.empty() || is_all_digits(term) || blacklist.contains(term)) continue;
      if (!seen.insert(term).second) continue;
      out.pruned_terms.push_back(
          PrunedTerm{term, level, static_cast<int>(terms.size() - i)});
    }
  };
  add_pruned(out.level1, 1);
  add_pruned(out.level2, 2);
  add_pruned(out.level3, 3);
  return out;
}

}  // namespace rdnsgeo
