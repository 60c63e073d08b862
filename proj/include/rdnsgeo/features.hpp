#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rdnsgeo/candidate_index.hpp"
#include "rdnsgeo/splitter.hpp"

namespace rdnsgeo {

// Layout: for each primary category in ordinal order the triple
// [is_match, log10(population+1), matched_letters], then the four
// secondary booleans. Serialized models record the version and refuse
// anything else.
inline constexpr std::uint32_t kFeatureLayoutVersion = 1;
inline constexpr std::size_t kFeatureCount = kPrimaryCategoryCount * 3 + 4;

using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr std::size_t kAdmin1MatchIndex = kPrimaryCategoryCount * 3;
inline constexpr std::size_t kFirstLettersAdmin1MatchIndex = kAdmin1MatchIndex + 1;
inline constexpr std::size_t kCountryMatchIndex = kAdmin1MatchIndex + 2;
inline constexpr std::size_t kCountryTldMatchIndex = kAdmin1MatchIndex + 3;

// Human-readable name of each feature slot, used in model files.
std::vector<std::string> feature_names();

struct SecondaryFlags {
  bool admin1_match = false;
  bool first_letters_admin1_match = false;
  bool country_match = false;
  bool country_tld_match = false;
};

// Context features for one candidate. Terms that produced the candidate's
// primary matches are excluded; evidence must come from a different term.
SecondaryFlags secondary_features(const SplitHostname& split,
                                  const CandidateMatch& candidate,
                                  const CandidateIndex& index);

FeatureVector assemble_features(const CandidateMatch& candidate,
                                const SecondaryFlags& secondary);

}  // namespace rdnsgeo
