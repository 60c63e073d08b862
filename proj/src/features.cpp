#include "rdnsgeo/features.hpp"

#include <algorithm>
#include <cmath>

#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
    std::string base = category_name(static_cast<PrimaryCategory>(c));
    names.push_back(base + "_is_match");
    names.push_back(base + "_population_log");
    names.push_back(base + "_matched_letters");
  }
  names.push_back("admin1_match");
  names.push_back("first_letters_admin1_match");
  names.push_back("country_match");
  names.push_back("country_tld_match");
  return names;
}

SecondaryFlags secondary_features(const SplitHostname& split,
                                  const CandidateMatch& candidate,
                                  const CandidateIndex& index) {
  SecondaryFlags flags;
  const Location& loc = index.location(candidate.location_idx);

  std::vector<std::string> terms;
  for (const PrunedTerm& t : split.pruned_terms) {
    if (!std::binary_search(candidate.matched_terms.begin(),
                            candidate.matched_terms.end(), t.term)) {
      terms.push_back(t.term);
    }
  }

  if (!loc.admin1_code.empty()) {
    std::string code = to_lower_ascii(loc.admin1_code);
    const Admin1* admin = index.find_admin1(loc.country_code, loc.admin1_code);
    std::string name_key = admin ? normalize_key(admin->name) : std::string();
    std::string ascii_key = admin ? normalize_key(admin->ascii_name) : std::string();
    for (const std::string& term : terms) {
      if (term == code || (!name_key.empty() && term == name_key) ||
          (!ascii_key.empty() && term == ascii_key)) {
        flags.admin1_match = true;
      }
      if (utf8_length(term) >= 3 &&
          ((!name_key.empty() && name_key.starts_with(term)) ||
           (!ascii_key.empty() && ascii_key.starts_with(term)))) {
        flags.first_letters_admin1_match = true;
      }
    }
  }

  if (!loc.country_code.empty()) {
    std::string code = to_lower_ascii(loc.country_code);
    const CountryInfo* country = index.find_country(loc.country_code);
    std::string name_key = country ? normalize_key(country->name) : std::string();
    for (const std::string& term : terms) {
      if (term == code || (!name_key.empty() && term == name_key)) {
        flags.country_match = true;
        break;
      }
    }
    if (country && !country->tld.empty() && split.tld == country->tld) {
      flags.country_tld_match = true;
    }
  }
  return flags;
}

FeatureVector assemble_features(const CandidateMatch& candidate,
                                const SecondaryFlags& secondary) {
  FeatureVector fv{};
  for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
    const CategoryTriple& t = candidate.categories[c];
    if (!t.is_match) continue;
    double pop = t.population > 0 ? static_cast<double>(t.population) : 0.0;
    fv[c * 3] = 1.0;
    fv[c * 3 + 1] = std::log10(pop + 1.0);
    fv[c * 3 + 2] = static_cast<double>(t.matched_letters);
  }
  fv[kAdmin1MatchIndex] = secondary.admin1_match ? 1.0 : 0.0;
  fv[kFirstLettersAdmin1MatchIndex] = secondary.first_letters_admin1_match ? 1.0 : 0.0;
  fv[kCountryMatchIndex] = secondary.country_match ? 1.0 : 0.0;
  fv[kCountryTldMatchIndex] = secondary.country_tld_match ? 1.0 : 0.0;
  return fv;
}

}  // namespace rdnsgeo
