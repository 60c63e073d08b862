#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdnsgeo/gazetteer.hpp"
#include "rdnsgeo/splitter.hpp"
#include "rdnsgeo/suffix_set.hpp"

namespace rdnsgeo {

// Order is load-bearing: it defines the feature-vector layout.
enum class PrimaryCategory : std::uint8_t {
  kCityName = 0,
  kAlternateNames,
  kAbbreviations,
  kCityAdmin1,
  kCityCountry,
  kNoVowelsName,
  kFirstLetters,
  kAirportCode,
  kClli,
  kUnlocode,
  kHostPatterns,
};

inline constexpr std::size_t kPrimaryCategoryCount = 11;

const char* category_name(PrimaryCategory c);

struct IndexEntry {
  std::uint32_t location_idx = 0;
  PrimaryCategory category = PrimaryCategory::kCityName;
  std::uint16_t matched_letters = 0;  // key length in code points

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct CategoryTriple {
  bool is_match = false;
  std::int64_t population = 0;
  std::uint32_t matched_letters = 0;
};

struct CandidateMatch {
  std::uint32_t location_idx = 0;
  std::array<CategoryTriple, kPrimaryCategoryCount> categories{};
  std::vector<std::string> matched_terms;  // sorted, unique

  bool matched(PrimaryCategory c) const {
    return categories[static_cast<std::size_t>(c)].is_match;
  }
};

struct IndexBuildOptions {
  std::int64_t min_population_for_derived = 10000;
  std::size_t max_novowel_variants = 64;
};

// Precomputed string -> candidate map plus the reference tables needed at
// query time. Immutable once built; lookups are read-only.
class CandidateIndex {
 public:
  static CandidateIndex build(const Gazetteer& gaz, SuffixSet suffixes,
                              TermBlacklist blacklist,
                              const IndexBuildOptions& opts = {});

  std::vector<CandidateMatch> lookup(const std::vector<std::string>& terms) const;

  const SuffixSet& suffixes() const { return suffixes_; }
  const TermBlacklist& blacklist() const { return blacklist_; }
  const std::vector<Location>& locations() const { return locations_; }
  const Location& location(std::uint32_t idx) const { return locations_[idx]; }
  std::optional<std::uint32_t> location_index_of(std::int64_t id) const;
  const Admin1* find_admin1(const std::string& country_code,
                            const std::string& admin1_code) const;
  const CountryInfo* find_country(const std::string& iso2) const;
  const std::vector<Admin1>& admin1_list() const { return admin1_; }
  const std::vector<CountryInfo>& countries() const { return countries_; }

  const std::vector<IndexEntry>* find_key(const std::string& key) const;
  const std::map<std::string, std::vector<IndexEntry>>& entries() const {
    return entries_;
  }
  std::size_t key_count() const { return entries_.size(); }

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static CandidateIndex load(std::istream& in);
  static CandidateIndex load_file(const std::string& path);

 private:
  SuffixSet suffixes_;
  TermBlacklist blacklist_;
  std::vector<Location> locations_;
  std::vector<Admin1> admin1_;
  std::vector<CountryInfo> countries_;
  std::map<std::string, std::vector<IndexEntry>> entries_;
  std::int64_t min_population_for_derived_ = 10000;

  std::unordered_map<std::int64_t, std::uint32_t> location_by_id_;
  std::unordered_map<std::string, std::size_t> admin1_by_key_;
  std::unordered_map<std::string, std::size_t> country_by_code_;

  void rebuild_lookups();
  void add_entry(const std::string& key, std::uint32_t loc_idx, PrimaryCategory cat);
};

}  // namespace rdnsgeo
