#include "rdnsgeo/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <zlib.h>

#include <json.hpp>

#include "rdnsgeo/splitter.hpp"
#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

gzFile as_gz(void* p) { return static_cast<gzFile>(p); }

bool parse_coord(const std::string& text, double lo, double hi, double& out) {
  if (text.empty()) return false;
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size() || !std::isfinite(v) || v < lo || v > hi) return false;
    out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

bool parse_ipv4(const std::string& text) {
  std::vector<std::string> parts = split(text, '.');
  if (parts.size() != 4) return false;
  for (const std::string& part : parts) {
    if (part.empty() || part.size() > 3 || !is_all_digits(part)) return false;
    if (part.size() > 1 && part[0] == '0') return false;
    int v = std::stoi(part);
    if (v < 0 || v > 255) return false;
  }
  return true;
}

CorpusReader::CorpusReader(const std::string& path, CorpusFormat format)
    : format_(format) {
  file_ = gzopen(path.c_str(), "rb");
  if (file_ == nullptr) {
    throw std::runtime_error("cannot open corpus file: " + path);
  }
}

CorpusReader::~CorpusReader() {
  if (file_ != nullptr) gzclose(as_gz(file_));
}

CorpusReader::CorpusReader(CorpusReader&& other) noexcept
    : file_(other.file_),
      format_(other.format_),
      malformed_(other.malformed_),
      lines_read_(other.lines_read_),
      first_line_(other.first_line_) {
  other.file_ = nullptr;
}

CorpusReader& CorpusReader::operator=(CorpusReader&& other) noexcept {
  if (this != &other) {
    if (file_ != nullptr) gzclose(as_gz(file_));
    file_ = other.file_;
    format_ = other.format_;
    malformed_ = other.malformed_;
    lines_read_ = other.lines_read_;
    first_line_ = other.first_line_;
    other.file_ = nullptr;
  }
  return *this;
}

bool CorpusReader::read_line(std::string& line) {
  line.clear();
  if (file_ == nullptr) return false;
  std::array<char, 65536> buf;
  bool got_any = false;
  while (gzgets(as_gz(file_), buf.data(), static_cast<int>(buf.size())) != nullptr) {
    got_any = true;
    line.append(buf.data());
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      break;
    }
  }
  if (!got_any) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool CorpusReader::parse_csv(const std::string& line, CorpusRecord& out) {
  std::vector<std::string> fields = split(line, ',');
  if (fields.size() < 2) return false;
  for (std::string& f : fields) f = std::string(trim(f));
  if (!parse_ipv4(fields[0]) || fields[1].empty()) return false;
  out.ip = fields[0];
  out.hostname = fields[1];
  out.truth.reset();
  if (fields.size() >= 4 && !fields[2].empty() && !fields[3].empty()) {
    double lat = 0.0;
    double lon = 0.0;
    if (!parse_coord(fields[2], -90.0, 90.0, lat) ||
        !parse_coord(fields[3], -180.0, 180.0, lon)) {
      return false;
    }
    out.truth = GeoPoint{lat, lon};
  }
  return true;
}

bool CorpusReader::parse_rapid7(const std::string& line, CorpusRecord& out) {
  nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
  if (!doc.is_object()) return false;
  auto name = doc.find("name");
  auto value = doc.find("value");
  if (name == doc.end() || value == doc.end()) return false;
  if (!name->is_string() || !value->is_string()) return false;
  out.ip = name->get<std::string>();
  out.hostname = value->get<std::string>();
  out.truth.reset();
  return !out.hostname.empty() && parse_ipv4(out.ip);
}

bool CorpusReader::next(CorpusRecord& out) {
  std::string line;
  while (read_line(line)) {
    ++lines_read_;
    std::string stripped(trim(line));
    if (stripped.empty()) continue;
    if (format_ == CorpusFormat::kCsv && first_line_) {
      first_line_ = false;
      if (stripped.rfind("ip,", 0) == 0) continue;
    }
    bool ok = format_ == CorpusFormat::kCsv ? parse_csv(stripped, out)
                                            : parse_rapid7(stripped, out);
    if (ok) return true;
    ++malformed_;
  }
  return false;
}

std::vector<CorpusRecord> read_corpus(const std::string& path, CorpusFormat format,
                                      std::size_t* malformed) {
  CorpusReader reader(path, format);
  std::vector<CorpusRecord> records;
  CorpusRecord rec;
  while (reader.next(rec)) records.push_back(rec);
  if (malformed != nullptr) *malformed = reader.malformed();
  return records;
}

CorpusStats analyze_corpus(CorpusReader& reader, const CandidateIndex& index) {
  CorpusStats stats;
  std::unordered_set<std::string> seen;
  std::map<std::string, std::size_t> tlds;
  CorpusRecord rec;
  while (reader.next(rec)) {
    ++stats.total;
    seen.insert(to_lower_ascii(rec.hostname));
    if (rec.truth.has_value()) ++stats.with_truth;
    if (!validate_hostname(rec.hostname, index.suffixes())) continue;
    ++stats.valid;
    SplitHostname sh;
    try {
      sh = split_hostname(rec.hostname, index.suffixes(), index.blacklist());
    } catch (const SplitError&) {
      continue;
    }
    ++tlds[sh.tld];
    bool city = false;
    bool airport = false;
    for (const PrunedTerm& term : sh.pruned_terms) {
      const std::vector<IndexEntry>* entries = index.find_key(term.term);
      if (entries == nullptr) continue;
      for (const IndexEntry& e : *entries) {
        if (e.category == PrimaryCategory::kCityName) city = true;
        if (e.category == PrimaryCategory::kAirportCode) airport = true;
      }
    }
    if (city) ++stats.city_name_matches;
    if (airport) ++stats.airport_code_matches;
  }
  stats.malformed = reader.malformed();
  stats.distinct = seen.size();
  stats.tld_counts.assign(tlds.begin(), tlds.end());
  std::sort(stats.tld_counts.begin(), stats.tld_counts.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return stats;
}

void write_stats(const CorpusStats& stats, std::ostream& out) {
  out << "records_total: " << stats.total << "\n";
  out << "records_malformed: " << stats.malformed << "\n";
  out << "hostnames_valid: " << stats.valid << "\n";
  out << "hostnames_distinct: " << stats.distinct << "\n";
  out << "records_with_coordinates: " << stats.with_truth << "\n";
  out << "city_name_matches: " << stats.city_name_matches << "\n";
  out << "airport_code_matches: " << stats.airport_code_matches << "\n";
  out << "top_tlds:\n";
  std::size_t shown = 0;
  for (const auto& [tld, count] : stats.tld_counts) {
    if (++shown > 10) break;
    out << "  " << tld << ": " << count << "\n";
  }
}

namespace {

// Deterministic helpers for the synthetic generator. Modulo bias and the
// [0,1) double construction are acceptable here; what matters is that the
// same seed produces the same corpus on every platform.
struct Rand {
  std::mt19937_64 rng;

  explicit Rand(std::uint64_t seed) : rng(seed) {}

  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
  }

  double uniform() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return uniform() < p; }
};

constexpr const char* kSchemeNames[] = {
    "city",   "altname",      "abbrev",  "cityadmin", "citycountry",
    "novowel", "firstletters", "airport", "clli",      "unlocode",
};
constexpr std::size_t kLocationSchemeCount = 10;
constexpr double kSchemeWeights[kLocationSchemeCount] = {16, 10, 10, 10, 9,
                                                         12, 14, 10, 9, 8};

bool usable_key(const std::string& key) {
  if (key.size() < 2) return false;
  for (char c : key) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (!ok) return false;
  }
  return true;
}

bool all_letters(const std::string& key) {
  for (char c : key) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

struct GeneratorTables {
  std::array<std::map<std::uint32_t, std::vector<std::string>>, kLocationSchemeCount>
      pools;
  std::array<std::vector<std::uint32_t>, kLocationSchemeCount> pool_locs;
  std::vector<std::uint32_t> cities;
  std::vector<double> cum;
  std::map<std::string, std::vector<std::uint32_t>> country_cities;
  std::map<std::string, std::vector<double>> country_cum;
  std::array<std::vector<std::pair<std::uint32_t, std::string>>, kLocationSchemeCount>
      traps;
  std::vector<std::size_t> trap_cats;
  std::vector<double> trap_cat_cum;
  std::map<std::string, std::string> country_labels;
  std::vector<std::string> junk_words;
};

GeneratorTables build_tables(const CandidateIndex& index) {
  GeneratorTables t;
  for (const auto& [key, entries] : index.entries()) {
    if (!usable_key(key)) continue;
    for (const IndexEntry& e : entries) {
      std::size_t cat = static_cast<std::size_t>(e.category);
      if (cat >= kLocationSchemeCount) continue;
      t.pools[cat][e.location_idx].push_back(key);
      if (index.location(e.location_idx).population >= 400000) {
        t.traps[cat].emplace_back(e.location_idx, key);
      }
    }
  }
  for (std::size_t cat = 0; cat < kLocationSchemeCount; ++cat) {
    if (t.traps[cat].empty()) continue;
    t.trap_cats.push_back(cat);
    double prev = t.trap_cat_cum.empty() ? 0.0 : t.trap_cat_cum.back();
    t.trap_cat_cum.push_back(prev + kSchemeWeights[cat]);
  }
  for (const CountryInfo& country : index.countries()) {
    std::string label = normalize_key(country.name);
    if (!usable_key(label) || !all_letters(label)) continue;
    if (index.find_key(label) != nullptr || index.blacklist().contains(label)) continue;
    t.country_labels[to_lower_ascii(country.iso2)] = label;
  }
  for (std::size_t cat = 0; cat < kLocationSchemeCount; ++cat) {
    for (auto& [loc, keys] : t.pools[cat]) {
      std::sort(keys.begin(), keys.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
      });
      t.pool_locs[cat].push_back(loc);
    }
  }

  const auto& city_pool = t.pools[static_cast<std::size_t>(PrimaryCategory::kCityName)];
  double total = 0.0;
  for (const auto& [loc, keys] : city_pool) {
    (void)keys;
    const Location& city = index.location(loc);
    total += std::log10(static_cast<double>(std::max<std::int64_t>(city.population, 0)) + 10.0);
    t.cities.push_back(loc);
    t.cum.push_back(total);
    std::string cc = to_lower_ascii(city.country_code);
    if (!cc.empty()) {
      auto& list = t.country_cities[cc];
      auto& cum = t.country_cum[cc];
      double prev = cum.empty() ? 0.0 : cum.back();
      list.push_back(loc);
      cum.push_back(prev + std::log10(static_cast<double>(
                               std::max<std::int64_t>(city.population, 0)) +
                           10.0));
    }
  }
  if (t.cities.empty()) {
    throw std::runtime_error("candidate index contains no usable city names");
  }

  const char* words[] = {"node",  "core",  "edge",   "gw",    "rtr",  "srv",
                         "link",  "peer",  "access", "border", "relay", "trunk",
                         "port",  "line",  "conn",   "wan",    "lan",  "ppp",
                         "dial",  "box",   "vlan",   "uplink", "mx",   "ns"};
  for (const char* w : words) {
    if (index.find_key(w) == nullptr && !index.blacklist().contains(w)) {
      t.junk_words.push_back(w);
    }
  }
  if (t.junk_words.empty()) t.junk_words.push_back("zzq");
  return t;
}

std::uint32_t weighted_pick(Rand& rand, const std::vector<std::uint32_t>& locs,
                            const std::vector<double>& cum) {
  double r = rand.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), r);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  if (idx >= locs.size()) idx = locs.size() - 1;
  return locs[idx];
}

std::uint32_t pick_city(Rand& rand, const GeneratorTables& t,
                        const std::string& country_cc) {
  if (!country_cc.empty() && rand.chance(0.8)) {
    auto it = t.country_cities.find(country_cc);
    if (it != t.country_cities.end() && !it->second.empty()) {
      return weighted_pick(rand, it->second, t.country_cum.at(country_cc));
    }
  }
  return weighted_pick(rand, t.cities, t.cum);
}

std::string consonant_blob(Rand& rand, const CandidateIndex& index, std::size_t len) {
  static const char alphabet[] = "bcdfghjklmnpqrstvwxz";
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::string blob;
    for (std::size_t i = 0; i < len; ++i) {
      blob.push_back(alphabet[rand.below(sizeof(alphabet) - 1)]);
    }
    if (index.find_key(blob) == nullptr) return blob;
  }
  return "qz" + std::to_string(rand.below(1000));
}

std::string junk_label(Rand& rand, const GeneratorTables& t,
                       const CandidateIndex& index) {
  switch (rand.below(4)) {
    case 0:
      return t.junk_words[rand.below(t.junk_words.size())] +
             std::to_string(rand.below(1000));
    case 1:
      return t.junk_words[rand.below(t.junk_words.size())];
    case 2:
      return t.junk_words[rand.below(t.junk_words.size())] + "-" +
             std::to_string(rand.below(256)) + "-" + std::to_string(rand.below(256));
    default:
      return consonant_blob(rand, index, 4 + rand.below(3));
  }
}

GeoPoint jittered(Rand& rand, const Location& city) {
  double lat = city.lat + (rand.uniform() - 0.5) * 0.04;
  double lon = city.lon + (rand.uniform() - 0.5) * 0.04;
  lat = std::clamp(lat, -89.99, 89.99);
  if (lon > 180.0) lon -= 360.0;
  if (lon < -180.0) lon += 360.0;
  return GeoPoint{lat, lon};
}

struct PatternCode {
  std::string code;
  std::uint32_t loc = 0;
};

struct DomainProfile {
  std::string name;
  std::string country_cc;
  double decoy_rate = 0.0;
  bool junk_heavy = false;
  bool pattern = false;
  int pattern_style = 0;
  std::vector<std::size_t> palette;
  std::vector<PatternCode> codes;
};

std::string format_ip(std::size_t counter) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "10.%zu.%zu.%zu", (counter >> 16) & 0xFF,
                (counter >> 8) & 0xFF, counter & 0xFF);
  return buf;
}

}  // namespace

std::vector<SyntheticRecord> generate_synthetic(const CandidateIndex& index,
                                                const SyntheticOptions& options) {
  if (options.domains == 0 || options.hosts_per_domain == 0) {
    throw std::invalid_argument("synthetic corpus must have at least one domain and host");
  }
  if (options.decoy_fraction < 0.0 || options.decoy_fraction >= 1.0) {
    throw std::invalid_argument("decoy fraction must lie in [0, 1)");
  }

  GeneratorTables tables = build_tables(index);
  Rand rand(options.seed == 0 ? 1 : options.seed);

  std::set<std::string> enabled(options.schemes.begin(), options.schemes.end());
  auto scheme_enabled = [&](const std::string& name) {
    return enabled.empty() || enabled.count(name) > 0;
  };
  std::vector<std::size_t> allowed_schemes;
  for (std::size_t s = 0; s < kLocationSchemeCount; ++s) {
    if (scheme_enabled(kSchemeNames[s]) && !tables.pool_locs[s].empty()) {
      allowed_schemes.push_back(s);
    }
  }
  bool patterns_enabled = scheme_enabled("pattern");

  const char* tld_cycle[] = {"net", "com", "net", "de", "jp", "com", "fr",
                             "uk",  "net", "br",  "pl", "com", "it", "au",
                             "us",  "net", "es",  "ca", "kr",  "nl"};
  const char* word_cycle[] = {"telecom",  "broadband", "netwave",  "metronet",
                              "speedlink", "onlinehub", "connectia", "diginet",
                              "expressway", "velocity", "skybridge", "fastpath",
                              "gigalink",  "homenet",   "airfiber",  "cityline",
                              "westgrid",  "eastcomm",  "nordnet",   "surfzone"};

  std::size_t junk_count = (options.domains + 4) / 5;
  double junk_rate = std::min(0.9, options.decoy_fraction * 3.0);
  double other_rate = 0.0;
  if (options.domains > junk_count) {
    other_rate = (options.decoy_fraction * static_cast<double>(options.domains) -
                  junk_rate * static_cast<double>(junk_count)) /
                 static_cast<double>(options.domains - junk_count);
    other_rate = std::clamp(other_rate, 0.0, 0.9);
  }

  std::vector<DomainProfile> profiles;
  profiles.reserve(options.domains);
  for (std::size_t i = 0; i < options.domains; ++i) {
    DomainProfile p;
    p.name = std::string(word_cycle[i % 20]) + std::to_string(i) + "." + tld_cycle[i % 20];
    for (const CountryInfo& info : index.countries()) {
      if (!info.tld.empty() && info.tld == std::string(".") + tld_cycle[i % 20]) {
        p.country_cc = to_lower_ascii(info.iso2);
        break;
      }
    }
    p.junk_heavy = (i % 5 == 0);
    p.decoy_rate = p.junk_heavy ? junk_rate : other_rate;
    p.pattern = patterns_enabled && (i % 4 == 2);
    p.pattern_style = static_cast<int>((i / 4) % 2);

    if (!allowed_schemes.empty()) {
      double total = 0.0;
      for (std::size_t s : allowed_schemes) total += kSchemeWeights[s];
      std::size_t want = 2 + rand.below(3);
      for (int attempt = 0; attempt < 24 && p.palette.size() < want; ++attempt) {
        double r = rand.uniform() * total;
        std::size_t chosen = allowed_schemes.back();
        for (std::size_t s : allowed_schemes) {
          if (r < kSchemeWeights[s]) {
            chosen = s;
            break;
          }
          r -= kSchemeWeights[s];
        }
        if (std::find(p.palette.begin(), p.palette.end(), chosen) == p.palette.end()) {
          p.palette.push_back(chosen);
        }
      }
    }

    if (p.pattern) {
      std::size_t n_codes = 3 + rand.below(4);
      std::set<std::string> used;
      for (std::size_t c = 0; c < n_codes; ++c) {
        PatternCode pc;
        do {
          pc.code = consonant_blob(rand, index, 4 + rand.below(2));
        } while (used.count(pc.code) > 0);
        used.insert(pc.code);
        pc.loc = pick_city(rand, tables, p.country_cc);
        if (p.pattern_style == 1) {
          for (int attempt = 0;
               attempt < 12 && index.location(pc.loc).admin1_code.empty(); ++attempt) {
            pc.loc = pick_city(rand, tables, p.country_cc);
          }
          if (index.location(pc.loc).admin1_code.empty()) p.pattern_style = 0;
        }
        p.codes.push_back(pc);
      }
    }
    profiles.push_back(std::move(p));
  }

  std::vector<SyntheticRecord> out;
  out.reserve(options.domains * options.hosts_per_domain);
  std::size_t ip_counter = 1;

  auto pick_pool_city = [&](std::size_t scheme, const std::string& cc) -> std::uint32_t {
    const auto& pool = tables.pools[scheme];
    for (int attempt = 0; attempt < 12; ++attempt) {
      std::uint32_t loc = pick_city(rand, tables, cc);
      if (pool.count(loc) > 0) return loc;
    }
    const auto& locs = tables.pool_locs[scheme];
    return locs[rand.below(locs.size())];
  };

  auto key_has_country = [&](const std::string& key, const std::string& cc,
                             std::uint32_t except_loc) {
    if (cc.empty()) return false;
    const auto* entries = index.find_key(key);
    if (entries == nullptr) return false;
    for (const IndexEntry& e : *entries) {
      if (e.location_idx == except_loc) continue;
      if (to_lower_ascii(index.location(e.location_idx).country_code) == cc) {
        return true;
      }
    }
    return false;
  };

  auto pick_key = [&](std::size_t scheme, std::uint32_t loc) -> std::string {
    const auto& keys = tables.pools[scheme].at(loc);
    const std::string cc = to_lower_ascii(index.location(loc).country_code);
    bool prefer_short = scheme == static_cast<std::size_t>(PrimaryCategory::kNoVowelsName) ||
                        scheme == static_cast<std::size_t>(PrimaryCategory::kFirstLetters);
    auto draw = [&]() -> const std::string& {
      if (prefer_short && rand.chance(0.7)) {
        std::size_t short_count = 0;
        while (short_count < keys.size() && keys[short_count].size() <= 4) ++short_count;
        if (short_count > 0) return keys[rand.below(short_count)];
      }
      return keys[rand.below(keys.size())];
    };
    for (int attempt = 0; attempt < 8; ++attempt) {
      const std::string& key = draw();
      if (!key_has_country(key, cc, loc)) return key;
    }
    return draw();
  };

  for (std::size_t di = 0; di < options.domains; ++di) {
    const DomainProfile& profile = profiles[di];
    for (std::size_t hi = 0; hi < options.hosts_per_domain; ++hi) {
      SyntheticRecord rec;
      rec.domain = profile.name;
      std::vector<std::string> labels;

      bool decoy = rand.chance(profile.decoy_rate);
      bool use_pattern = !decoy && profile.pattern && rand.chance(0.6);
      if (!decoy && !use_pattern && profile.palette.empty()) {
        if (profile.pattern) {
          use_pattern = true;
        } else {
          decoy = true;
        }
      }

      if (decoy) {
        rec.scheme = "decoy";
        rec.decoy = true;
        std::uint32_t home = pick_city(rand, tables, profile.country_cc);
        const std::string home_cc = to_lower_ascii(index.location(home).country_code);
        rec.city_id = index.location(home).id;
        labels.push_back(junk_label(rand, tables, index));
        if (rand.chance(0.5)) labels.push_back(junk_label(rand, tables, index));
        if (!tables.trap_cats.empty()) {
          std::size_t n_traps = 8 + rand.below(3);
          std::string last_trap_cc;
          std::set<std::string> used;
          for (std::size_t k = 0; k < n_traps; ++k) {
            for (int attempt = 0; attempt < 8; ++attempt) {
              double r = rand.uniform() * tables.trap_cat_cum.back();
              auto it = std::upper_bound(tables.trap_cat_cum.begin(),
                                         tables.trap_cat_cum.end(), r);
              std::size_t cat_idx = static_cast<std::size_t>(
                  std::min<std::ptrdiff_t>(it - tables.trap_cat_cum.begin(),
                                           tables.trap_cats.size() - 1));
              const auto& pool = tables.traps[tables.trap_cats[cat_idx]];
              const auto& trap = pool[rand.below(pool.size())];
              std::string trap_cc =
                  to_lower_ascii(index.location(trap.first).country_code);
              if (trap.first == home || trap_cc == home_cc ||
                  (!profile.country_cc.empty() && trap_cc == profile.country_cc) ||
                  used.count(trap.second) > 0 ||
                  key_has_country(trap.second, home_cc, trap.first) ||
                  key_has_country(trap.second, profile.country_cc, trap.first)) {
                continue;
              }
              labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(
                                                 rand.below(labels.size() + 1)),
                            trap.second);
              used.insert(trap.second);
              last_trap_cc = trap_cc;
              break;
            }
          }
          if (!last_trap_cc.empty() && rand.chance(0.04)) {
            auto country_it = tables.country_labels.find(last_trap_cc);
            if (country_it != tables.country_labels.end()) {
              labels.push_back(country_it->second);
            }
          }
        }
        rec.record.truth = jittered(rand, index.location(home));
      } else if (use_pattern) {
        rec.scheme = "pattern";
        const PatternCode& pc = profile.codes[rand.below(profile.codes.size())];
        rec.city_id = index.location(pc.loc).id;
        labels.push_back(junk_label(rand, tables, index));
        if (rand.chance(0.4)) labels.push_back(junk_label(rand, tables, index));
        labels.push_back(pc.code);
        if (profile.pattern_style == 1) {
          labels.push_back(to_lower_ascii(index.location(pc.loc).admin1_code));
        }
        rec.record.truth = jittered(rand, index.location(pc.loc));
      } else {
        std::size_t scheme = profile.palette[rand.below(profile.palette.size())];
        rec.scheme = kSchemeNames[scheme];
        std::uint32_t loc = pick_pool_city(scheme, profile.country_cc);
        const Location& city = index.location(loc);
        rec.city_id = city.id;
        std::string key = pick_key(scheme, loc);

        if (rand.chance(0.75)) labels.push_back(junk_label(rand, tables, index));
        double r = rand.uniform();
        if (r < 0.55) {
          labels.push_back(key);
        } else if (r < 0.80) {
          if (rand.chance(0.5)) {
            labels.push_back(tables.junk_words[rand.below(tables.junk_words.size())] +
                             "-" + key);
          } else {
            labels.push_back(key + "-" + std::to_string(rand.below(100)));
          }
        } else if (all_letters(key)) {
          labels.push_back(key + std::to_string(rand.below(100)));
        } else {
          labels.push_back(key);
        }

        double admin_chance = profile.country_cc.empty() ? 0.75 : 0.6;
        if (scheme != static_cast<std::size_t>(PrimaryCategory::kCityAdmin1) &&
            !city.admin1_code.empty() && rand.chance(admin_chance)) {
          std::string admin_label;
          std::string code = to_lower_ascii(city.admin1_code);
          bool code_ok = !key_has_country(code, to_lower_ascii(city.country_code), loc);
          if (code_ok) {
            const auto* entries = index.find_key(code);
            if (entries != nullptr) {
              for (const IndexEntry& e : *entries) {
                if (e.location_idx == loc) {
                  code_ok = false;
                  break;
                }
              }
            }
          }
          if (code_ok) admin_label = code;
          if (admin_label.empty() || rand.chance(0.25)) {
            const Admin1* admin = index.find_admin1(city.country_code, city.admin1_code);
            if (admin != nullptr) {
              std::string name_key = normalize_key(admin->ascii_name.empty()
                                                       ? admin->name
                                                       : admin->ascii_name);
              if (name_key.size() >= 5 && all_letters(name_key) &&
                  index.find_key(name_key.substr(0, 4)) == nullptr) {
                admin_label = name_key.substr(0, 4);
              }
            }
          }
          if (!admin_label.empty()) labels.push_back(admin_label);
        }
        if (scheme != static_cast<std::size_t>(PrimaryCategory::kCityCountry) &&
            !city.country_code.empty()) {
          double country_chance = profile.country_cc.empty() ? 0.15 : 0.05;
          auto country_it =
              tables.country_labels.find(to_lower_ascii(city.country_code));
          if (country_it != tables.country_labels.end() && rand.chance(country_chance)) {
            labels.push_back(country_it->second);
          }
        }
        rec.record.truth = jittered(rand, city);
      }

      std::string host;
      for (const std::string& label : labels) {
        host += label;
        host += '.';
      }
      host += profile.name;
      rec.record.hostname = host;
      rec.record.ip = format_ip(ip_counter++);
      out.push_back(std::move(rec));
    }
  }
  return out;
}

void write_corpus_csv(const std::vector<SyntheticRecord>& records, std::ostream& out) {
  out << "ip,hostname,lat,lon\n";
  char buf[64];
  for (const SyntheticRecord& rec : records) {
    out << rec.record.ip << ',' << rec.record.hostname << ',';
    if (rec.record.truth.has_value()) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f", rec.record.truth->lat,
                    rec.record.truth->lon);
      out << buf;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_manifest_csv(const std::vector<SyntheticRecord>& records, std::ostream& out) {
  out << "ip,hostname,domain,scheme,decoy,city_id,lat,lon\n";
  char buf[64];
  for (const SyntheticRecord& rec : records) {
    out << rec.record.ip << ',' << rec.record.hostname << ',' << rec.domain << ','
        << rec.scheme << ',' << (rec.decoy ? 1 : 0) << ',' << rec.city_id << ',';
    if (rec.record.truth.has_value()) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f", rec.record.truth->lat,
                    rec.record.truth->lon);
      out << buf;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> resolve_ptr(
    const std::vector<std::string>& ips) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(ips.size());
  for (const std::string& ip : ips) {
    std::string hostname;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    if (inet_pton(AF_INET, ip.c_str(), &addr.sin_addr) == 1) {
      char node[NI_MAXHOST];
      int rc = getnameinfo(reinterpret_cast<const sockaddr*>(&addr), sizeof(addr),
                           node, sizeof(node), nullptr, 0, NI_NAMEREQD);
      if (rc == 0) hostname = node;
    }
    out.emplace_back(ip, hostname);
  }
  return out;
}

}  // namespace rdnsgeo
