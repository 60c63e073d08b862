#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace rdnsgeo {

// Public-suffix rules: plain entries, "*.parent" wildcards and "!host"
// exceptions. Lookup follows the published algorithm: an exception rule
// beats everything, otherwise the matching rule with the most labels wins,
// and a host with no matching rule falls back to its last label.
class SuffixSet {
 public:
  struct Match {
    std::string suffix;     // longest public suffix of the queried host
    bool from_rule = false; // false when only the implicit last-label default applied
  };

  void add_rule(std::string_view line);

  // host must already be lowercase; ACE labels are fine because rules are
  // stored in both their ASCII and decoded Unicode forms.
  Match match(std::string_view host) const;

  // Public suffix plus one more label, or nullopt when the host has no
  // label left of an explicitly listed suffix.
  std::optional<std::string> registrable_domain(std::string_view host) const;

  std::size_t rule_count() const { return rule_count_; }
  bool empty() const { return rule_count_ == 0; }

  void save(std::ostream& out) const;
  static SuffixSet load_binary(std::istream& in);

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // parent stored, "*.ck" -> "ck"
  std::unordered_set<std::string> exception_;  // "!www.ck" -> "www.ck"
  std::size_t rule_count_ = 0;

  void insert_forms(std::unordered_set<std::string>& set, std::string_view rule);
};

// Parses a public suffix list file: comments ("//"), blank lines, and text
// after the first whitespace on a line are ignored.
SuffixSet load_public_suffixes(std::istream& in);
SuffixSet load_public_suffixes_file(const std::string& path);

}  // namespace rdnsgeo
