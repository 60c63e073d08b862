#include "rdnsgeo/candidate_index.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rdnsgeo/serial.hpp"
#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

constexpr char kIndexMagic[] = "RDNSGIDX";
constexpr std::uint32_t kIndexVersion = 1;

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_ascii_letter(char c) { return c >= 'a' && c <= 'z'; }

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

// Lowercased words of a place name, punctuation stripped per word.
std::vector<std::string> name_words(const std::string& name) {
  std::vector<std::string> words;
  for (const auto& raw : split(name, ' ')) {
    std::string w = normalize_key(raw);
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

std::string devowel(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (!(is_ascii_letter(c) && is_vowel(c))) out.push_back(c);
  }
  return out;
}

// First letter, interior consonants, last letter of one lowercase word,
// order preserved.
std::string word_letter_pool(const std::string& word) {
  if (word.size() <= 2) return word;
  std::string pool;
  pool.push_back(word.front());
  for (std::size_t i = 1; i + 1 < word.size(); ++i) {
    if (!is_vowel(word[i])) pool.push_back(word[i]);
  }
  pool.push_back(word.back());
  return pool;
}

// Ordered subsequences of exactly `want` characters, lexicographic by
// position, capped. Emits into `out`.
void enumerate_subsequences(const std::string& pool, std::size_t want,
                            std::size_t cap, std::vector<std::string>& out) {
  if (pool.size() < want) return;
  std::string cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (out.size() >= cap) return;
    if (cur.size() == want) {
      out.push_back(cur);
      return;
    }
    std::size_t need = want - cur.size();
    for (std::size_t i = start; i + need <= pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
      if (out.size() >= cap) return;
    }
  };
  rec(rec, 0);
}

}  // namespace

const char* category_name(PrimaryCategory c) {
  switch (c) {
    case PrimaryCategory::kCityName: return "city_name";
    case PrimaryCategory::kAlternateNames: return "alternate_names";
    case PrimaryCategory::kAbbreviations: return "abbreviations";
    case PrimaryCategory::kCityAdmin1: return "city_admin1";
    case PrimaryCategory::kCityCountry: return "city_country";
    case PrimaryCategory::kNoVowelsName: return "no_vowels_name";
    case PrimaryCategory::kFirstLetters: return "first_letters";
    case PrimaryCategory::kAirportCode: return "airport_code";
    case PrimaryCategory::kClli: return "clli";
    case PrimaryCategory::kUnlocode: return "unlocode";
    case PrimaryCategory::kHostPatterns: return "host_patterns";
  }
  return "unknown";
}

void CandidateIndex::add_entry(const std::string& key, std::uint32_t loc_idx,
                               PrimaryCategory cat) {
  if (utf8_length(key) < 2) return;
  std::vector<IndexEntry>& list = entries_[key];
  for (const IndexEntry& e : list) {
    if (e.location_idx == loc_idx && e.category == cat) return;
  }
  IndexEntry e;
  e.location_idx = loc_idx;
  e.category = cat;
  e.matched_letters = static_cast<std::uint16_t>(utf8_length(key));
  list.push_back(e);
}

CandidateIndex CandidateIndex::build(const Gazetteer& gaz, SuffixSet suffixes,
                                     TermBlacklist blacklist,
                                     const IndexBuildOptions& opts) {
  CandidateIndex index;
  index.suffixes_ = std::move(suffixes);
  index.blacklist_ = std::move(blacklist);
  index.locations_ = gaz.cities;
  index.admin1_ = gaz.admin1;
  index.countries_ = gaz.countries;
  index.min_population_for_derived_ = opts.min_population_for_derived;
  index.rebuild_lookups();

  for (std::uint32_t i = 0; i < index.locations_.size(); ++i) {
    const Location& loc = index.locations_[i];
    std::string key_name = normalize_key(loc.name);
    std::string key_ascii = normalize_key(loc.ascii_name);

    std::vector<std::string> names;
    if (!key_name.empty()) names.push_back(key_name);
    if (!key_ascii.empty() && key_ascii != key_name) names.push_back(key_ascii);

    for (const std::string& n : names) {
      index.add_entry(n, i, PrimaryCategory::kCityName);
    }
    for (const std::string& alt : loc.alternate_names) {
      std::string key = normalize_key(alt);
      if (!key.empty()) index.add_entry(key, i, PrimaryCategory::kAlternateNames);
    }

    for (const std::string& src : {loc.name, loc.ascii_name}) {
      std::vector<std::string> words = name_words(src);
      if (words.size() < 2) continue;
      std::string acronym;
      for (const std::string& w : words) acronym.push_back(w.front());
      index.add_entry(acronym, i, PrimaryCategory::kAbbreviations);
    }

    if (!loc.admin1_code.empty()) {
      std::string admin = to_lower_ascii(loc.admin1_code);
      for (const std::string& n : names) {
        index.add_entry(n + admin, i, PrimaryCategory::kCityAdmin1);
      }
    }

    if (!loc.country_code.empty()) {
      std::string cc = to_lower_ascii(loc.country_code);
      const CountryInfo* country = index.find_country(loc.country_code);
      for (const std::string& n : names) {
        index.add_entry(n + cc, i, PrimaryCategory::kCityCountry);
        if (country) {
          std::string cname = normalize_key(country->name);
          if (!cname.empty()) {
            index.add_entry(n + cname, i, PrimaryCategory::kCityCountry);
          }
          if (country->tld.size() > 1 && country->tld[0] == '.') {
            std::string tld_letters = country->tld.substr(1);
            if (tld_letters != cc) {
              index.add_entry(n + tld_letters, i, PrimaryCategory::kCityCountry);
            }
          }
        }
      }
    }

    bool derived_ok = loc.population >= index.min_population_for_derived_;
    for (const std::string& n : names) {
      std::string skeleton = devowel(n);
      if (skeleton.size() >= 3) {
        for (std::size_t len = 3; len <= skeleton.size(); ++len) {
          index.add_entry(skeleton.substr(0, len), i, PrimaryCategory::kNoVowelsName);
        }
      }
    }
    if (derived_ok) {
      std::vector<std::string> words = name_words(loc.ascii_name.empty()
                                                      ? loc.name
                                                      : loc.ascii_name);
      std::string pool;
      for (const std::string& w : words) pool += word_letter_pool(w);
      std::vector<std::string> variants;
      enumerate_subsequences(pool, 4, opts.max_novowel_variants, variants);
      for (const std::string& v : variants) {
        index.add_entry(v, i, PrimaryCategory::kNoVowelsName);
      }

      for (const std::string& n : names) {
        std::size_t max_len = std::min<std::size_t>(10, n.size());
        for (std::size_t len = 3; len <= max_len; ++len) {
          index.add_entry(n.substr(0, len), i, PrimaryCategory::kFirstLetters);
        }
      }
    }
  }

  for (const AirportCode& ap : gaz.airports) {
    auto idx = index.location_index_of(ap.location_id);
    if (!idx) continue;
    index.add_entry(ap.code, *idx, PrimaryCategory::kAirportCode);
  }

  CityGrid grid(index.locations_);
  auto resolve_place = [&](const std::string& name, const std::string& country,
                           std::optional<GeoPoint> coords) -> std::optional<std::uint32_t> {
    std::string want = normalize_key(name);
    if (!want.empty()) {
      std::optional<std::uint32_t> found;
      for (std::uint32_t i = 0; i < index.locations_.size(); ++i) {
        const Location& loc = index.locations_[i];
        if (loc.country_code != country) continue;
        bool hit = normalize_key(loc.name) == want || normalize_key(loc.ascii_name) == want;
        for (std::size_t a = 0; !hit && a < loc.alternate_names.size(); ++a) {
          hit = normalize_key(loc.alternate_names[a]) == want;
        }
        if (hit && (!found || loc.population > index.locations_[*found].population)) {
          found = i;
        }
      }
      if (found) return found;
    }
    if (coords) {
      auto near = grid.nearest(*coords, country);
      if (!near) near = grid.nearest(*coords);
      if (near) return static_cast<std::uint32_t>(*near);
    }
    return std::nullopt;
  };

  for (const ClliRecord& rec : gaz.clli) {
    auto idx = resolve_place(rec.city, rec.country, GeoPoint{rec.lat, rec.lon});
    if (!idx) continue;
    index.add_entry(rec.code, *idx, PrimaryCategory::kClli);
  }

  for (const UnlocodeRecord& rec : gaz.unlocode) {
    auto idx = resolve_place(rec.place_name, rec.country_code, rec.coords);
    if (!idx) continue;
    std::string key = to_lower_ascii(rec.country_code + rec.location_code);
    index.add_entry(key, *idx, PrimaryCategory::kUnlocode);
  }

  return index;
}

std::vector<CandidateMatch> CandidateIndex::lookup(
    const std::vector<std::string>& terms) const {
  std::unordered_map<std::uint32_t, CandidateMatch> merged;
  for (const std::string& term : terms) {
    auto it = entries_.find(term);
    if (it == entries_.end()) continue;
    for (const IndexEntry& e : it->second) {
      CandidateMatch& cm = merged[e.location_idx];
      cm.location_idx = e.location_idx;
      CategoryTriple& t = cm.categories[static_cast<std::size_t>(e.category)];
      t.is_match = true;
      t.population = locations_[e.location_idx].population;
      t.matched_letters = std::max<std::uint32_t>(t.matched_letters, e.matched_letters);
      cm.matched_terms.push_back(term);
    }
  }
  std::vector<CandidateMatch> out;
  out.reserve(merged.size());
  for (auto& [idx, cm] : merged) {
    std::sort(cm.matched_terms.begin(), cm.matched_terms.end());
    cm.matched_terms.erase(
        std::unique(cm.matched_terms.begin(), cm.matched_terms.end()),
        cm.matched_terms.end());
    out.push_back(std::move(cm));
  }
  std::sort(out.begin(), out.end(), [this](const CandidateMatch& a, const CandidateMatch& b) {
    return locations_[a.location_idx].id < locations_[b.location_idx].id;
  });
  return out;
}

std::optional<std::uint32_t> CandidateIndex::location_index_of(std::int64_t id) const {
  auto it = location_by_id_.find(id);
  if (it == location_by_id_.end()) return std::nullopt;
  return it->second;
}

const Admin1* CandidateIndex::find_admin1(const std::string& country_code,
                                          const std::string& admin1_code) const {
  auto it = admin1_by_key_.find(to_upper_ascii(country_code) + "." +
                                to_upper_ascii(admin1_code));
  if (it == admin1_by_key_.end()) return nullptr;
  return &admin1_[it->second];
}

const CountryInfo* CandidateIndex::find_country(const std::string& iso2) const {
  auto it = country_by_code_.find(to_upper_ascii(iso2));
  if (it == country_by_code_.end()) return nullptr;
  return &countries_[it->second];
}

const std::vector<IndexEntry>* CandidateIndex::find_key(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  return &it->second;
}

void CandidateIndex::rebuild_lookups() {
  location_by_id_.clear();
  for (std::uint32_t i = 0; i < locations_.size(); ++i) {
    location_by_id_.emplace(locations_[i].id, i);
  }
  admin1_by_key_.clear();
  for (std::size_t i = 0; i < admin1_.size(); ++i) {
    admin1_by_key_.emplace(
        to_upper_ascii(admin1_[i].country_code) + "." + to_upper_ascii(admin1_[i].code),
        i);
  }
  country_by_code_.clear();
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    country_by_code_.emplace(to_upper_ascii(countries_[i].iso2), i);
  }
}

void CandidateIndex::save(std::ostream& out) const {
  std::ostringstream body_stream;
  BinaryWriter w(body_stream);
  body_stream.write(kIndexMagic, 8);
  w.u32(kIndexVersion);

  suffixes_.save(body_stream);

  std::vector<std::string> terms = blacklist_.sorted_terms();
  w.u32(static_cast<std::uint32_t>(terms.size()));
  for (const auto& t : terms) w.str(t);

  w.i64(min_population_for_derived_);

  w.u32(static_cast<std::uint32_t>(locations_.size()));
  for (const Location& loc : locations_) {
    w.i64(loc.id);
    w.str(loc.name);
    w.str(loc.ascii_name);
    w.f64(loc.lat);
    w.f64(loc.lon);
    w.i64(loc.population);
    w.str(loc.admin1_code);
    w.str(loc.country_code);
  }

  w.u32(static_cast<std::uint32_t>(admin1_.size()));
  for (const Admin1& a : admin1_) {
    w.str(a.country_code);
    w.str(a.code);
    w.str(a.name);
    w.str(a.ascii_name);
  }

  w.u32(static_cast<std::uint32_t>(countries_.size()));
  for (const CountryInfo& c : countries_) {
    w.str(c.iso2);
    w.str(c.name);
    w.str(c.tld);
  }

  w.u32(static_cast<std::uint32_t>(entries_.size()));
  for (const auto& [key, list] : entries_) {
    w.str(key);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const IndexEntry& e : list) {
      w.u32(e.location_idx);
      w.u8(static_cast<std::uint8_t>(e.category));
      w.u16(e.matched_letters);
    }
  }

  std::string body = body_stream.str();
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  BinaryWriter tail(out);
  tail.u64(fnv1a64(body));
}

void CandidateIndex::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerialError("cannot write index file: " + path);
  save(out);
  if (!out) throw SerialError("failed writing index file: " + path);
}

CandidateIndex CandidateIndex::load(std::istream& in) {
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (all.size() < 20) throw SerialError("index file truncated");
  std::string body = all.substr(0, all.size() - 8);
  std::istringstream tail_stream(all.substr(all.size() - 8));
  BinaryReader tail(tail_stream);
  if (tail.u64() != fnv1a64(body)) throw SerialError("index file checksum mismatch");

  std::istringstream body_stream(body);
  char magic[8];
  body_stream.read(magic, 8);
  if (std::string_view(magic, 8) != std::string_view(kIndexMagic, 8)) {
    throw SerialError("not an index file");
  }
  BinaryReader r(body_stream);
  std::uint32_t version = r.u32();
  if (version != kIndexVersion) {
    throw SerialError("unsupported index file version " + std::to_string(version));
  }

  CandidateIndex index;
  index.suffixes_ = SuffixSet::load_binary(body_stream);

  std::uint32_t n_black = r.u32();
  for (std::uint32_t i = 0; i < n_black; ++i) index.blacklist_.add(r.str());

  index.min_population_for_derived_ = r.i64();

  std::uint32_t n_loc = r.u32();
  index.locations_.reserve(n_loc);
  for (std::uint32_t i = 0; i < n_loc; ++i) {
    Location loc;
    loc.id = r.i64();
    loc.name = r.str();
    loc.ascii_name = r.str();
    loc.lat = r.f64();
    loc.lon = r.f64();
    loc.population = r.i64();
    loc.admin1_code = r.str();
    loc.country_code = r.str();
    index.locations_.push_back(std::move(loc));
  }

  std::uint32_t n_admin = r.u32();
  index.admin1_.reserve(n_admin);
  for (std::uint32_t i = 0; i < n_admin; ++i) {
    Admin1 a;
    a.country_code = r.str();
    a.code = r.str();
    a.name = r.str();
    a.ascii_name = r.str();
    index.admin1_.push_back(std::move(a));
  }

  std::uint32_t n_country = r.u32();
  index.countries_.reserve(n_country);
  for (std::uint32_t i = 0; i < n_country; ++i) {
    CountryInfo c;
    c.iso2 = r.str();
    c.name = r.str();
    c.tld = r.str();
    index.countries_.push_back(std::move(c));
  }

  std::uint32_t n_keys = r.u32();
  for (std::uint32_t i = 0; i < n_keys; ++i) {
    std::string key = r.str();
    std::uint32_t n_entries = r.u32();
    std::vector<IndexEntry> list;
    list.reserve(n_entries);
    for (std::uint32_t j = 0; j < n_entries; ++j) {
      IndexEntry e;
      e.location_idx = r.u32();
      e.category = static_cast<PrimaryCategory>(r.u8());
      e.matched_letters = r.u16();
      if (e.location_idx >= index.locations_.size() ||
          static_cast<std::size_t>(e.category) >= kPrimaryCategoryCount) {
        throw SerialError("index entry out of range");
      }
      list.push_back(e);
    }
    index.entries_.emplace(std::move(key), std::move(list));
  }

  index.rebuild_lookups();
  return index;
}

CandidateIndex CandidateIndex::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerialError("cannot open index file: " + path);
  return load(in);
}

}  // namespace rdnsgeo
