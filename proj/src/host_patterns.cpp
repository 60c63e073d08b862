#include "rdnsgeo/host_patterns.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rdnsgeo/serial.hpp"
#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

constexpr char kPatternMagic[] = "RDNSGPAT";
constexpr std::uint32_t kPatternVersion = 1;

struct Occurrence {
  std::vector<PatternSlot> slots;
  std::vector<GeoPoint> points;
};

// Medoid: the observed point minimizing summed distance to the others.
// Above the exact limit both the candidate set and the reference set are
// the same evenly strided subsample.
GeoPoint medoid(const std::vector<GeoPoint>& points, const MiningParams& params) {
  const std::vector<GeoPoint>* set = &points;
  std::vector<GeoPoint> sampled;
  if (points.size() > params.exact_medoid_limit && params.medoid_sample > 0) {
    sampled.reserve(params.medoid_sample);
    for (std::size_t i = 0; i < params.medoid_sample; ++i) {
      sampled.push_back(points[i * points.size() / params.medoid_sample]);
    }
    set = &sampled;
  }
  std::size_t best = 0;
  double best_sum = 0.0;
  for (std::size_t i = 0; i < set->size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < set->size(); ++j) {
      sum += haversine_km((*set)[i], (*set)[j]);
    }
    if (i == 0 || sum < best_sum) {
      best = i;
      best_sum = sum;
    }
  }
  return (*set)[best];
}

std::string slot_key(const std::vector<PatternSlot>& slots) {
  std::string key;
  for (const PatternSlot& s : slots) {
    key += s.term;
    key.push_back('@');
    key += std::to_string(s.position_from_right);
    key.push_back('|');
  }
  return key;
}

}  // namespace

void PatternRuleSet::add(PatternRule rule) {
  by_domain_[rule.domain].push_back(std::move(rule));
  ++count_;
}

const std::vector<PatternRule>* PatternRuleSet::rules_for(
    const std::string& domain) const {
  auto it = by_domain_.find(domain);
  if (it == by_domain_.end()) return nullptr;
  return &it->second;
}

void PatternRuleSet::save(std::ostream& out) const {
  std::ostringstream body_stream;
  BinaryWriter w(body_stream);
  body_stream.write(kPatternMagic, 8);
  w.u32(kPatternVersion);
  w.u64(count_);
  for (const auto& [domain, rules] : by_domain_) {
    for (const PatternRule& rule : rules) {
      w.str(domain);
      w.u8(static_cast<std::uint8_t>(rule.slots.size()));
      for (const PatternSlot& s : rule.slots) {
        w.str(s.term);
        w.u32(static_cast<std::uint32_t>(s.position_from_right));
      }
      w.i64(rule.location_id);
      w.u32(static_cast<std::uint32_t>(rule.support_count));
      w.f64(rule.support_ratio);
    }
  }
  std::string body = body_stream.str();
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  BinaryWriter tail(out);
  tail.u64(fnv1a64(body));
}

void PatternRuleSet::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerialError("cannot write pattern file: " + path);
  save(out);
  if (!out) throw SerialError("failed writing pattern file: " + path);
}

PatternRuleSet PatternRuleSet::load(std::istream& in) {
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (all.size() < 20) throw SerialError("pattern file truncated");
  std::string body = all.substr(0, all.size() - 8);
  std::istringstream tail_stream(all.substr(all.size() - 8));
  BinaryReader tail(tail_stream);
  if (tail.u64() != fnv1a64(body)) throw SerialError("pattern file checksum mismatch");

  std::istringstream body_stream(body);
  char magic[8];
  body_stream.read(magic, 8);
  if (std::string_view(magic, 8) != std::string_view(kPatternMagic, 8)) {
    throw SerialError("not a pattern file");
  }
  BinaryReader r(body_stream);
  std::uint32_t version = r.u32();
  if (version != kPatternVersion) {
    throw SerialError("unsupported pattern file version " + std::to_string(version));
  }
  PatternRuleSet set;
  std::uint64_t count = r.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    PatternRule rule;
    rule.domain = r.str();
    std::uint8_t n_slots = r.u8();
    if (n_slots < 1 || n_slots > 2) throw SerialError("pattern rule slot count out of range");
    for (std::uint8_t j = 0; j < n_slots; ++j) {
      PatternSlot slot;
      slot.term = r.str();
      slot.position_from_right = static_cast<int>(r.u32());
      rule.slots.push_back(std::move(slot));
    }
    rule.location_id = r.i64();
    rule.support_count = static_cast<int>(r.u32());
    rule.support_ratio = r.f64();
    set.add(std::move(rule));
  }
  return set;
}

PatternRuleSet PatternRuleSet::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerialError("cannot open pattern file: " + path);
  return load(in);
}

PatternRuleSet mine_patterns(const std::vector<TrainingHost>& corpus,
                             const CandidateIndex& index,
                             const MiningParams& params) {
  std::map<std::string, std::vector<const TrainingHost*>> by_domain;
  for (const TrainingHost& host : corpus) {
    by_domain[host.split.domain].push_back(&host);
  }

  CityGrid grid(index.locations());
  PatternRuleSet out;

  for (const auto& [domain, hosts] : by_domain) {
    std::map<std::string, Occurrence> occurrences;
    for (const TrainingHost* host : hosts) {
      const std::vector<std::string>& level1 = host->split.level1;
      int n = static_cast<int>(level1.size());
      for (int i = 0; i < n; ++i) {
        PatternSlot a{level1[i], n - i};
        {
          std::vector<PatternSlot> slots{a};
          Occurrence& occ = occurrences[slot_key(slots)];
          if (occ.points.empty()) occ.slots = slots;
          occ.points.push_back(host->truth);
        }
        for (int j = i + 1; j < n; ++j) {
          PatternSlot b{level1[j], n - j};
          std::vector<PatternSlot> slots{b, a};  // ascending position
          Occurrence& occ = occurrences[slot_key(slots)];
          if (occ.points.empty()) occ.slots = slots;
          occ.points.push_back(host->truth);
        }
      }
    }

    for (const auto& [key, occ] : occurrences) {
      if (occ.points.size() < params.min_examples) continue;
      GeoPoint center = medoid(occ.points, params);
      std::size_t within = 0;
      for (const GeoPoint& p : occ.points) {
        if (haversine_km(center, p) <= params.radius_km) ++within;
      }
      double ratio = static_cast<double>(within) / static_cast<double>(occ.points.size());
      if (ratio < params.min_support_ratio) continue;
      auto nearest = grid.nearest(center);
      if (!nearest) continue;
      PatternRule rule;
      rule.domain = domain;
      rule.slots = occ.slots;
      rule.location_id = index.locations()[*nearest].id;
      rule.support_count = static_cast<int>(within);
      rule.support_ratio = ratio;
      out.add(std::move(rule));
    }
  }
  return out;
}

std::vector<PatternHit> apply_patterns(const PatternRuleSet& rules,
                                       const SplitHostname& split,
                                       const CandidateIndex& index) {
  const std::vector<PatternRule>* domain_rules = rules.rules_for(split.domain);
  if (!domain_rules) return {};

  std::map<std::uint32_t, PatternHit> merged;
  int n = static_cast<int>(split.level1.size());
  for (const PatternRule& rule : *domain_rules) {
    bool all = !rule.slots.empty();
    std::uint32_t letters = 0;
    for (const PatternSlot& slot : rule.slots) {
      int idx = n - slot.position_from_right;
      if (idx < 0 || idx >= n || split.level1[idx] != slot.term) {
        all = false;
        break;
      }
      letters += static_cast<std::uint32_t>(utf8_length(slot.term));
    }
    if (!all) continue;
    auto loc_idx = index.location_index_of(rule.location_id);
    if (!loc_idx) continue;
    PatternHit& hit = merged[*loc_idx];
    hit.location_idx = *loc_idx;
    if (letters >= hit.matched_letters) hit.matched_letters = letters;
    for (const PatternSlot& slot : rule.slots) hit.slot_terms.push_back(slot.term);
  }

  std::vector<PatternHit> out;
  out.reserve(merged.size());
  for (auto& [idx, hit] : merged) {
    std::sort(hit.slot_terms.begin(), hit.slot_terms.end());
    hit.slot_terms.erase(std::unique(hit.slot_terms.begin(), hit.slot_terms.end()),
                         hit.slot_terms.end());
    out.push_back(std::move(hit));
  }
  return out;
}

std::vector<CandidateMatch> generate_candidates(const CandidateIndex& index,
                                                const PatternRuleSet* rules,
                                                const SplitHostname& split) {
  std::vector<CandidateMatch> candidates = index.lookup(split.pruned_term_strings());
  if (!rules) return candidates;

  std::vector<PatternHit> hits = apply_patterns(*rules, split, index);
  for (const PatternHit& hit : hits) {
    CandidateMatch* target = nullptr;
    for (CandidateMatch& cand : candidates) {
      if (cand.location_idx == hit.location_idx) {
        target = &cand;
        break;
      }
    }
    if (!target) {
      candidates.emplace_back();
      target = &candidates.back();
      target->location_idx = hit.location_idx;
    }
    CategoryTriple& t =
        target->categories[static_cast<std::size_t>(PrimaryCategory::kHostPatterns)];
    t.is_match = true;
    t.population = index.location(hit.location_idx).population;
    t.matched_letters = std::max(t.matched_letters, hit.matched_letters);
    for (const std::string& term : hit.slot_terms) {
      target->matched_terms.push_back(term);
    }
    std::sort(target->matched_terms.begin(), target->matched_terms.end());
    target->matched_terms.erase(
        std::unique(target->matched_terms.begin(), target->matched_terms.end()),
        target->matched_terms.end());
  }

  std::sort(candidates.begin(), candidates.end(),
            [&index](const CandidateMatch& a, const CandidateMatch& b) {
              return index.location(a.location_idx).id < index.location(b.location_idx).id;
            });
  return candidates;
}

}  // namespace rdnsgeo
