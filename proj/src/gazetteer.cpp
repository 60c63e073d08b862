#include "rdnsgeo/gazetteer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void bump(LoadStats* stats, bool ok) {
  if (!stats) return;
  ++stats->rows;
  if (ok) {
    ++stats->loaded;
  } else {
    ++stats->skipped;
  }
}

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

// "3734N 12659E" -> (37.567, 126.983). Latitude part is DDMM, longitude
// DDDMM. Returns nullopt on any deviation from that shape.
std::optional<GeoPoint> parse_unlocode_coords(std::string_view s) {
  s = trim(s);
  std::size_t space = s.find(' ');
  if (space == std::string_view::npos) return std::nullopt;
  std::string_view lat_s = s.substr(0, space);
  std::string_view lon_s = trim(s.substr(space + 1));
  if (lat_s.size() != 5 || lon_s.size() != 6) return std::nullopt;
  char ns = lat_s[4];
  char ew = lon_s[5];
  if ((ns != 'N' && ns != 'S') || (ew != 'E' && ew != 'W')) return std::nullopt;
  if (!is_all_digits(lat_s.substr(0, 4)) || !is_all_digits(lon_s.substr(0, 5))) {
    return std::nullopt;
  }
  int lat_deg = (lat_s[0] - '0') * 10 + (lat_s[1] - '0');
  int lat_min = (lat_s[2] - '0') * 10 + (lat_s[3] - '0');
  int lon_deg = (lon_s[0] - '0') * 100 + (lon_s[1] - '0') * 10 + (lon_s[2] - '0');
  int lon_min = (lon_s[3] - '0') * 10 + (lon_s[4] - '0');
  if (lat_min >= 60 || lon_min >= 60) return std::nullopt;
  GeoPoint p;
  p.lat = (lat_deg + lat_min / 60.0) * (ns == 'S' ? -1.0 : 1.0);
  p.lon = (lon_deg + lon_min / 60.0) * (ew == 'W' ? -1.0 : 1.0);
  if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
    return std::nullopt;
  }
  return p;
}

}  // namespace

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

const Location* Gazetteer::find_city(std::int64_t id) const {
  auto it = city_index_.find(id);
  if (it == city_index_.end()) return nullptr;
  return &cities[it->second];
}

void Gazetteer::rebuild_city_index() {
  city_index_.clear();
  city_index_.reserve(cities.size());
  for (std::size_t i = 0; i < cities.size(); ++i) {
    city_index_.emplace(cities[i].id, i);
  }
}

std::vector<Location> load_cities(std::istream& in, LoadStats* stats) {
  std::vector<Location> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 19) {
      bump(stats, false);
      continue;
    }
    Location loc;
    if (!parse_int64(cols[0], loc.id) || !parse_double(cols[4], loc.lat) ||
        !parse_double(cols[5], loc.lon) || !parse_int64(cols[14], loc.population) ||
        loc.lat < -90.0 || loc.lat > 90.0 || loc.lon < -180.0 || loc.lon > 180.0) {
      bump(stats, false);
      continue;
    }
    loc.name = cols[1];
    loc.ascii_name = cols[2];
    if (!cols[3].empty()) {
      for (auto& alt : split(cols[3], ',')) {
        if (!alt.empty()) loc.alternate_names.push_back(std::move(alt));
      }
    }
    loc.country_code = to_upper_ascii(trim(cols[8]));
    loc.admin1_code = std::string(trim(cols[10]));
    if (loc.name.empty() && loc.ascii_name.empty()) {
      bump(stats, false);
      continue;
    }
    bump(stats, true);
    out.push_back(std::move(loc));
  }
  return out;
}

std::vector<AirportCode> load_alternate_names(std::istream& in, Gazetteer& gaz,
                                              LoadStats* stats) {
  gaz.rebuild_city_index();
  std::unordered_map<std::int64_t, std::size_t> index;
  index.reserve(gaz.cities.size());
  for (std::size_t i = 0; i < gaz.cities.size(); ++i) index.emplace(gaz.cities[i].id, i);

  std::vector<AirportCode> airports;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 4) {
      bump(stats, false);
      continue;
    }
    std::int64_t geoname_id = 0;
    if (!parse_int64(cols[1], geoname_id)) {
      bump(stats, false);
      continue;
    }
    const std::string& lang = cols[2];
    const std::string& name = cols[3];
    auto it = index.find(geoname_id);
    if (it == index.end() || name.empty()) {
      bump(stats, false);
      continue;
    }
    // Pseudo-languages carrying links, postal codes and the like rather
    // than name variants.
    if (lang == "link" || lang == "post" || lang == "wkdt" || lang == "unlc" ||
        lang == "phon" || lang == "piny") {
      bump(stats, false);
      continue;
    }
    if (lang == "iata" || lang == "icao" || lang == "faac") {
      AirportCode code;
      code.code = to_lower_ascii(name);
      code.location_id = geoname_id;
      code.authority = lang == "iata"   ? AirportAuthority::kIata
                       : lang == "icao" ? AirportAuthority::kIcao
                                        : AirportAuthority::kFaac;
      airports.push_back(std::move(code));
    } else {
      gaz.cities[it->second].alternate_names.push_back(name);
    }
    bump(stats, true);
  }
  return airports;
}

std::vector<Admin1> load_admin1(std::istream& in, LoadStats* stats) {
  std::vector<Admin1> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 3) {
      bump(stats, false);
      continue;
    }
    std::size_t dot = cols[0].find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= cols[0].size()) {
      bump(stats, false);
      continue;
    }
    Admin1 a;
    a.country_code = to_upper_ascii(cols[0].substr(0, dot));
    a.code = cols[0].substr(dot + 1);
    a.name = cols[1];
    a.ascii_name = cols[2];
    bump(stats, true);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<CountryInfo> load_country_info(std::istream& in, LoadStats* stats) {
  std::vector<CountryInfo> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 10 || cols[0].size() != 2) {
      bump(stats, false);
      continue;
    }
    CountryInfo c;
    c.iso2 = to_upper_ascii(cols[0]);
    c.name = cols[4];
    c.tld = to_lower_ascii(trim(cols[9]));
    bump(stats, true);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ClliRecord> load_clli(std::istream& in, LoadStats* stats) {
  std::vector<ClliRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("code,", 0) == 0) continue;
    }
    std::vector<std::string> cols = parse_csv_line(line);
    if (cols.size() != 6) {
      bump(stats, false);
      continue;
    }
    ClliRecord rec;
    rec.code = to_lower_ascii(trim(cols[0]));
    rec.city = std::string(trim(cols[1]));
    rec.region = std::string(trim(cols[2]));
    rec.country = to_upper_ascii(trim(cols[3]));
    if (rec.code.empty() || !parse_double(cols[4], rec.lat) || !parse_double(cols[5], rec.lon)) {
      bump(stats, false);
      continue;
    }
    bump(stats, true);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<UnlocodeRecord> load_unlocode(std::istream& in, LoadStats* stats) {
  std::vector<UnlocodeRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = parse_csv_line(line);
    if (cols.size() < 11) {
      bump(stats, false);
      continue;
    }
    UnlocodeRecord rec;
    rec.country_code = to_upper_ascii(trim(cols[1]));
    rec.location_code = std::string(trim(cols[2]));
    rec.place_name = std::string(trim(cols[4].empty() ? cols[3] : cols[4]));
    if (rec.country_code.size() != 2 || rec.location_code.size() != 3 ||
        rec.place_name.empty()) {
      bump(stats, false);
      continue;
    }
    rec.coords = parse_unlocode_coords(cols[10]);
    bump(stats, true);
    out.push_back(std::move(rec));
  }
  return out;
}

Gazetteer load_gazetteer(const GazetteerPaths& paths, LoadStats* stats) {
  Gazetteer gaz;
  auto open = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return in;
  };
  {
    std::ifstream in = open(paths.cities);
    gaz.cities = load_cities(in, stats);
  }
  if (!paths.alternate_names.empty()) {
    std::ifstream in = open(paths.alternate_names);
    gaz.airports = load_alternate_names(in, gaz, stats);
  }
  if (!paths.admin1.empty()) {
    std::ifstream in = open(paths.admin1);
    gaz.admin1 = load_admin1(in, stats);
  }
  if (!paths.country_info.empty()) {
    std::ifstream in = open(paths.country_info);
    gaz.countries = load_country_info(in, stats);
  }
  if (!paths.clli.empty()) {
    std::ifstream in = open(paths.clli);
    gaz.clli = load_clli(in, stats);
  }
  if (!paths.unlocode.empty()) {
    std::ifstream in = open(paths.unlocode);
    gaz.unlocode = load_unlocode(in, stats);
  }
  gaz.rebuild_city_index();
  return gaz;
}

CityGrid::CityGrid(const std::vector<Location>& cities) : cities_(&cities) {
  for (std::size_t i = 0; i < cities.size(); ++i) {
    const Location& loc = cities[i];
    int lat_i = static_cast<int>(std::floor(loc.lat));
    lat_i = std::clamp(lat_i, -90, 89);
    int lon_i = static_cast<int>(std::floor(loc.lon));
    lon_i = ((lon_i + 180) % 360 + 360) % 360;
    std::int32_t key = static_cast<std::int32_t>((lat_i + 90) * 360 + lon_i);
    buckets_[key].push_back(static_cast<std::uint32_t>(i));
  }
}

std::optional<std::size_t> CityGrid::nearest(const GeoPoint& p,
                                             const std::string& country_filter) const {
  if (cities_->empty()) return std::nullopt;
  int plat = std::clamp(static_cast<int>(std::floor(p.lat)), -90, 89);
  int plon = static_cast<int>(std::floor(p.lon));

  std::optional<std::size_t> best;
  double best_km = 0.0;

  auto visit_cell = [&](int lat_i, int lon_i) {
    if (lat_i < -90 || lat_i > 89) return;
    lon_i = ((lon_i + 180) % 360 + 360) % 360;
    std::int32_t key = static_cast<std::int32_t>((lat_i + 90) * 360 + lon_i);
    auto it = buckets_.find(key);
    if (it == buckets_.end()) return;
    for (std::uint32_t idx : it->second) {
      const Location& loc = (*cities_)[idx];
      if (!country_filter.empty() && loc.country_code != country_filter) continue;
      double d = haversine_km(p, loc.point());
      if (!best || d < best_km ||
          (d == best_km && loc.id < (*cities_)[*best].id)) {
        best = idx;
        best_km = d;
      }
    }
  };

  constexpr double kPi = 3.14159265358979323846;
  for (int r = 0; r <= 181; ++r) {
    if (best) {
      // Minimum great-circle distance to any cell in this ring: at least
      // (r-1) degrees away in latitude or longitude, with the longitude
      // scale taken at the widest latitude the ring can reach.
      double max_lat = std::min(89.9, std::abs(p.lat) + r + 1);
      double scale = std::min(1.0, std::cos(max_lat * kPi / 180.0));
      double bound = (r - 1) * 111.0 * scale;
      if (bound > best_km) break;
    }
    if (r == 0) {
      visit_cell(plat, plon);
      continue;
    }
    for (int dx = -r; dx <= r; ++dx) {
      visit_cell(plat - r, plon + dx);
      visit_cell(plat + r, plon + dx);
    }
    for (int dy = -r + 1; dy <= r - 1; ++dy) {
      visit_cell(plat + dy, plon - r);
      visit_cell(plat + dy, plon + r);
    }
  }
  return best;
}

}  // namespace rdnsgeo
