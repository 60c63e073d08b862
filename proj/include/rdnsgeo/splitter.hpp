#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rdnsgeo/suffix_set.hpp"

namespace rdnsgeo {

// Generic hosting terms that never help with location, pruned from the
// term list before index lookups (the raw levels keep them).
class TermBlacklist {
 public:
  TermBlacklist() = default;
  static TermBlacklist defaults();
  static TermBlacklist load(std::istream& in);
  static TermBlacklist load_file(const std::string& path);

  void add(std::string_view term);
  bool contains(std::string_view term) const;
  std::size_t size() const { return terms_.size(); }
  std::vector<std::string> sorted_terms() const;

 private:
  std::unordered_set<std::string> terms_;
};

class SplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrunedTerm {
  std::string term;
  int level = 0;               // 1, 2 or 3
  int position_from_right = 0; // 1-based within its level
};

struct SplitHostname {
  std::string raw;           // input as given
  std::string unicode_form;  // lowercased, ACE labels decoded
  std::string public_suffix;
  std::string tld;     // last label with leading dot, e.g. ".com"
  std::string domain;  // registrable domain: suffix plus one label
  std::string subdomain;

  // Level 1: subdomain labels. Level 2: level-1 terms split on hyphens.
  // Level 3: level-2 terms split at letter/digit boundaries. All raw.
  std::vector<std::string> level1;
  std::vector<std::string> level2;
  std::vector<std::string> level3;

  // Deduplicated terms from all levels minus all-digit and blacklisted
  // ones; this is what candidate lookups consume.
  std::vector<PrunedTerm> pruned_terms;

  std::vector<std::string> pruned_term_strings() const;
};

// RFC 1123 shape plus a resolvable registrable domain: letters, digits and
// inner hyphens only, labels up to 63 octets, 253 total, and the name must
// extend an explicitly listed public suffix.
bool validate_hostname(std::string_view hostname, const SuffixSet& suffixes);

// Splits a valid hostname. Throws SplitError when validate_hostname would
// return false.
SplitHostname split_hostname(std::string_view hostname, const SuffixSet& suffixes,
                             const TermBlacklist& blacklist);

}  // namespace rdnsgeo
