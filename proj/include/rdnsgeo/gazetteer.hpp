#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdnsgeo/geo.hpp"

namespace rdnsgeo {

struct Location {
  std::int64_t id = 0;
  std::string name;
  std::string ascii_name;
  std::vector<std::string> alternate_names;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t population = 0;
  std::string admin1_code;   // as published, e.g. "MN" or "ON"
  std::string country_code;  // ISO-3166 alpha-2, uppercase

  GeoPoint point() const { return GeoPoint{lat, lon}; }
};

struct Admin1 {
  std::string country_code;
  std::string code;
  std::string name;
  std::string ascii_name;
};

enum class AirportAuthority { kIata, kIcao, kFaac };

struct AirportCode {
  std::string code;  // lowercase
  std::int64_t location_id = 0;
  AirportAuthority authority = AirportAuthority::kIata;
};

struct ClliRecord {
  std::string code;  // lowercase, 6 chars
  std::string city;
  std::string region;
  std::string country;  // ISO-3166 alpha-2, uppercase
  double lat = 0.0;
  double lon = 0.0;
};

struct UnlocodeRecord {
  std::string country_code;   // uppercase
  std::string location_code;  // as published, may contain digits
  std::string place_name;
  std::optional<GeoPoint> coords;
};

struct CountryInfo {
  std::string iso2;  // uppercase
  std::string name;
  std::string tld;  // with leading dot, e.g. ".uk"
};

struct LoadStats {
  std::size_t rows = 0;
  std::size_t loaded = 0;
  std::size_t skipped = 0;
};

struct Gazetteer {
  std::vector<Location> cities;
  std::vector<Admin1> admin1;
  std::vector<AirportCode> airports;
  std::vector<ClliRecord> clli;
  std::vector<UnlocodeRecord> unlocode;
  std::vector<CountryInfo> countries;

  const Location* find_city(std::int64_t id) const;
  void rebuild_city_index();

 private:
  std::unordered_map<std::int64_t, std::size_t> city_index_;
};

// GeoNames cities table: 19 tab-separated columns per row. Malformed rows
// are counted in stats and skipped.
std::vector<Location> load_cities(std::istream& in, LoadStats* stats = nullptr);

// GeoNames alternate names table. Rows whose language column is iata, icao
// or faac become airport codes; other rows append an alternate name to the
// referenced city. Rows pointing at unknown ids are skipped.
std::vector<AirportCode> load_alternate_names(std::istream& in, Gazetteer& gaz,
                                              LoadStats* stats = nullptr);

// GeoNames admin1 table: "US.MN<TAB>Minnesota<TAB>Minnesota<TAB>id".
std::vector<Admin1> load_admin1(std::istream& in, LoadStats* stats = nullptr);

// GeoNames country info table ('#' comments, tld in column 9).
std::vector<CountryInfo> load_country_info(std::istream& in, LoadStats* stats = nullptr);

// CSV with header: code,city,region,country,lat,lon. Codes are lowercased.
std::vector<ClliRecord> load_clli(std::istream& in, LoadStats* stats = nullptr);

// UN/LOCODE code-list CSV (quoted fields). Country header rows, which have
// an empty location column, are skipped. Coordinates like "3734N 12659E"
// are converted to decimal degrees; rows without them keep nullopt.
std::vector<UnlocodeRecord> load_unlocode(std::istream& in, LoadStats* stats = nullptr);

struct GazetteerPaths {
  std::string cities;
  std::string alternate_names;  // optional, empty to skip
  std::string admin1;           // optional
  std::string country_info;     // optional
  std::string clli;             // optional
  std::string unlocode;         // optional
};

Gazetteer load_gazetteer(const GazetteerPaths& paths, LoadStats* stats = nullptr);

// Fixed one-degree bucket grid for nearest-city queries.
class CityGrid {
 public:
  explicit CityGrid(const std::vector<Location>& cities);

  // Index into the city vector, or nullopt when it is empty (or no city of
  // the requested country exists). country_filter is uppercase ISO-2; empty
  // means any country.
  std::optional<std::size_t> nearest(const GeoPoint& p,
                                     const std::string& country_filter = {}) const;

 private:
  const std::vector<Location>* cities_;
  std::unordered_map<std::int32_t, std::vector<std::uint32_t>> buckets_;
};

// One CSV field splitter shared by the loaders: handles quoted fields with
// doubled quotes.
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace rdnsgeo
