#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rdnsgeo/candidate_index.hpp"
#include "rdnsgeo/geo.hpp"
#include "rdnsgeo/splitter.hpp"

namespace rdnsgeo {

struct TrainingHost {
  SplitHostname split;
  GeoPoint truth;
};

struct PatternSlot {
  std::string term;
  int position_from_right = 0;  // 1-based over level-1 terms

  friend bool operator==(const PatternSlot&, const PatternSlot&) = default;
};

struct PatternRule {
  std::string domain;
  std::vector<PatternSlot> slots;  // one or two, positions distinct
  std::int64_t location_id = 0;
  int support_count = 0;       // occurrences within the radius
  double support_ratio = 0.0;  // support_count / total occurrences
};

class PatternRuleSet {
 public:
  void add(PatternRule rule);
  const std::vector<PatternRule>* rules_for(const std::string& domain) const;
  const std::map<std::string, std::vector<PatternRule>>& by_domain() const {
    return by_domain_;
  }
  std::size_t size() const { return count_; }

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static PatternRuleSet load(std::istream& in);
  static PatternRuleSet load_file(const std::string& path);

 private:
  std::map<std::string, std::vector<PatternRule>> by_domain_;
  std::size_t count_ = 0;
};

struct MiningParams {
  double min_support_ratio = 0.40;
  double radius_km = 20.0;
  std::size_t min_examples = 10;
  // Medoid is exact up to this many occurrence points, then computed over an
  // evenly strided subsample (keeps mining deterministic without a seed).
  std::size_t exact_medoid_limit = 2000;
  std::size_t medoid_sample = 1000;
};

// For every domain and every 1- or 2-slot level-1 term permutation with
// enough occurrences: emit a rule when at least min_support_ratio of the
// occurrences lie within radius_km of the occurrence medoid. The rule's
// location is the gazetteer city nearest to that medoid.
PatternRuleSet mine_patterns(const std::vector<TrainingHost>& corpus,
                             const CandidateIndex& index,
                             const MiningParams& params = {});

struct PatternHit {
  std::uint32_t location_idx = 0;
  std::uint32_t matched_letters = 0;      // total slot-term length
  std::vector<std::string> slot_terms;    // sorted, unique
};

// Conjunction semantics: every slot term must sit at its position from the
// right of the hostname's level-1 terms. One hit per location (longest
// match kept).
std::vector<PatternHit> apply_patterns(const PatternRuleSet& rules,
                                       const SplitHostname& split,
                                       const CandidateIndex& index);

// Index lookup over pruned terms merged with pattern hits; rules may be
// null when no pattern file is in play.
std::vector<CandidateMatch> generate_candidates(const CandidateIndex& index,
                                                const PatternRuleSet* rules,
                                                const SplitHostname& split);

}  // namespace rdnsgeo
