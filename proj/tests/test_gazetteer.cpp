#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rdnsgeo/gazetteer.hpp"
#include "rdnsgeo/geo.hpp"

using namespace rdnsgeo;

namespace {

const std::string kFixtures = FIXTURES_DIR;

GazetteerPaths fixture_paths() {
  GazetteerPaths paths;
  paths.cities = kFixtures + "/geonames/cities1000.txt";
  paths.alternate_names = kFixtures + "/geonames/alternateNames.txt";
  paths.admin1 = kFixtures + "/geonames/admin1CodesASCII.txt";
  paths.country_info = kFixtures + "/geonames/countryInfo.txt";
  paths.clli = kFixtures + "/clli.csv";
  paths.unlocode = kFixtures + "/unlocode.csv";
  return paths;
}

const Gazetteer& fixture_gazetteer() {
  static Gazetteer gaz = load_gazetteer(fixture_paths());
  return gaz;
}

}  // namespace

TEST_CASE("parse_csv_line handles quoting") {
  CHECK(parse_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(parse_csv_line("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
  CHECK(parse_csv_line("\"he said \"\"hi\"\"\",x") ==
        std::vector<std::string>{"he said \"hi\"", "x"});
  CHECK(parse_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(parse_csv_line("") == std::vector<std::string>{""});
  CHECK(parse_csv_line("a,b\r") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_cities reads every fixture row") {
  std::ifstream in(kFixtures + "/geonames/cities1000.txt");
  REQUIRE(in.good());
  LoadStats stats;
  auto cities = load_cities(in, &stats);
  CHECK(stats.rows == 125);
  CHECK(stats.loaded == 125);
  CHECK(stats.skipped == 0);
  CHECK(cities.size() == 125);
}

TEST_CASE("load_cities parses fields and inline alternate names") {
  const Gazetteer& gaz = fixture_gazetteer();
  const Location* nyc = gaz.find_city(5128581);
  REQUIRE(nyc != nullptr);
  CHECK(nyc->name == "New York City");
  CHECK(nyc->ascii_name == "New York City");
  CHECK(nyc->country_code == "US");
  CHECK(nyc->admin1_code == "NY");
  CHECK(nyc->population == 8175133);
  CHECK(nyc->lat == doctest::Approx(40.71427));
  CHECK(nyc->lon == doctest::Approx(-74.00597));
  // "NYC" and "New York" come from the cities file; the language-tagged
  // "New York" row appends a second copy.
  CHECK(std::count(nyc->alternate_names.begin(), nyc->alternate_names.end(), "NYC") == 1);
  CHECK(std::count(nyc->alternate_names.begin(), nyc->alternate_names.end(), "New York") == 2);

  const Location* sao = gaz.find_city(3448439);
  REQUIRE(sao != nullptr);
  CHECK(sao->name == "S\xc3\xa3o Paulo");
  CHECK(sao->ascii_name == "Sao Paulo");
  CHECK(sao->admin1_code == "SP");
}

TEST_CASE("load_cities rejects malformed rows") {
  std::istringstream in(
      "1\tGood\tGood\t\t10.0\t20.0\t\t\tUS\t\tCA\t\t\t\t1000\t\t\t\t\n"
      "2\tBadLat\tBadLat\t\tabc\t20.0\t\t\tUS\t\tCA\t\t\t\t1000\t\t\t\t\n"
      "3\tShortRow\tShortRow\t10.0\t20.0\n"
      "4\tBadRange\tBadRange\t\t95.0\t20.0\t\t\tUS\t\tCA\t\t\t\t1000\t\t\t\t\n");
  LoadStats stats;
  auto cities = load_cities(in, &stats);
  CHECK(stats.rows == 4);
  CHECK(stats.loaded == 1);
  CHECK(stats.skipped == 3);
  REQUIRE(cities.size() == 1);
  CHECK(cities[0].name == "Good");
}

TEST_CASE("load_alternate_names splits airports from name variants") {
  std::ifstream cities_in(kFixtures + "/geonames/cities1000.txt");
  Gazetteer gaz;
  gaz.cities = load_cities(cities_in);

  std::ifstream in(kFixtures + "/geonames/alternateNames.txt");
  REQUIRE(in.good());
  LoadStats stats;
  auto airports = load_alternate_names(in, gaz, &stats);
  CHECK(stats.rows == 31);
  CHECK(stats.loaded == 27);
  // Wiki link, postal code, unknown id, and empty name rows.
  CHECK(stats.skipped == 4);
  CHECK(airports.size() == 22);

  auto find_code = [&](const std::string& code) -> const AirportCode* {
    for (const auto& a : airports) {
      if (a.code == code) return &a;
    }
    return nullptr;
  };
  const AirportCode* fra = find_code("fra");
  REQUIRE(fra != nullptr);
  CHECK(fra->location_id == 2925533);
  CHECK(fra->authority == AirportAuthority::kIata);

  const AirportCode* fhu = find_code("fhu");
  REQUIRE(fhu != nullptr);
  CHECK(fhu->location_id == 5314328);
  CHECK(fhu->authority == AirportAuthority::kFaac);

  const AirportCode* eddf = find_code("eddf");
  REQUIRE(eddf != nullptr);
  CHECK(eddf->location_id == 2925533);
  CHECK(eddf->authority == AirportAuthority::kIcao);

  gaz.rebuild_city_index();
  const Location* seoul = gaz.find_city(1835848);
  REQUIRE(seoul != nullptr);
  CHECK(std::count(seoul->alternate_names.begin(), seoul->alternate_names.end(),
                   "\xec\x84\x9c\xec\x9a\xb8") == 1);

  // The empty-name row must not append anything to London.
  const Location* london = gaz.find_city(2643743);
  REQUIRE(london != nullptr);
  CHECK(london->alternate_names.empty());
}

TEST_CASE("load_admin1 parses country.code keys") {
  std::ifstream in(kFixtures + "/geonames/admin1CodesASCII.txt");
  REQUIRE(in.good());
  LoadStats stats;
  auto admin1 = load_admin1(in, &stats);
  CHECK(stats.rows == 79);
  CHECK(stats.loaded == 79);
  CHECK(admin1.size() == 79);

  auto find = [&](const std::string& cc, const std::string& code) -> const Admin1* {
    for (const auto& a : admin1) {
      if (a.country_code == cc && a.code == code) return &a;
    }
    return nullptr;
  };
  const Admin1* az = find("US", "AZ");
  REQUIRE(az != nullptr);
  CHECK(az->name == "Arizona");
  const Admin1* on = find("CA", "ON");
  REQUIRE(on != nullptr);
  CHECK(on->name == "Ontario");
  const Admin1* ro = find("UY", "RO");
  REQUIRE(ro != nullptr);
  CHECK(ro->name == "Rocha");
  const Admin1* osaka = find("JP", "27");
  REQUIRE(osaka != nullptr);
  CHECK(osaka->ascii_name == "Osaka");
}

TEST_CASE("load_country_info reads iso2 name and tld") {
  std::ifstream in(kFixtures + "/geonames/countryInfo.txt");
  REQUIRE(in.good());
  LoadStats stats;
  auto countries = load_country_info(in, &stats);
  CHECK(stats.rows == 16);
  CHECK(stats.loaded == 16);
  CHECK(countries.size() == 16);

  auto find = [&](const std::string& iso) -> const CountryInfo* {
    for (const auto& c : countries) {
      if (c.iso2 == iso) return &c;
    }
    return nullptr;
  };
  const CountryInfo* gb = find("GB");
  REQUIRE(gb != nullptr);
  CHECK(gb->name == "United Kingdom");
  CHECK(gb->tld == ".uk");
  const CountryInfo* us = find("US");
  REQUIRE(us != nullptr);
  CHECK(us->tld == ".us");
}

TEST_CASE("load_clli skips the header and lowercases codes") {
  std::ifstream in(kFixtures + "/clli.csv");
  REQUIRE(in.good());
  LoadStats stats;
  auto clli = load_clli(in, &stats);
  CHECK(stats.rows == 14);
  CHECK(stats.loaded == 14);
  CHECK(clli.size() == 14);

  auto find = [&](const std::string& code) -> const ClliRecord* {
    for (const auto& r : clli) {
      if (r.code == code) return &r;
    }
    return nullptr;
  };
  const ClliRecord* denver = find("dnvrco");
  REQUIRE(denver != nullptr);
  CHECK(denver->city == "Denver");
  CHECK(denver->region == "CO");
  CHECK(denver->country == "US");
  CHECK(denver->lat == doctest::Approx(39.73915));

  const ClliRecord* brooklyn = find("brklny");
  REQUIRE(brooklyn != nullptr);
  CHECK(brooklyn->city == "Brooklyn");
}

TEST_CASE("load_unlocode parses DDMM coordinates") {
  std::ifstream in(kFixtures + "/unlocode.csv");
  REQUIRE(in.good());
  LoadStats stats;
  auto unlocode = load_unlocode(in, &stats);
  CHECK(stats.rows == 20);
  CHECK(stats.loaded == 19);
  // The ".BRAZIL" country header row has no location code.
  CHECK(stats.skipped == 1);

  auto find = [&](const std::string& cc, const std::string& code) -> const UnlocodeRecord* {
    for (const auto& r : unlocode) {
      if (r.country_code == cc && r.location_code == code) return &r;
    }
    return nullptr;
  };
  const UnlocodeRecord* sel = find("KR", "SEL");
  REQUIRE(sel != nullptr);
  CHECK(sel->place_name == "Seoul");
  REQUIRE(sel->coords.has_value());
  CHECK(sel->coords->lat == doctest::Approx(37.0 + 34.0 / 60.0).epsilon(1e-12));
  CHECK(sel->coords->lon == doctest::Approx(126.0 + 59.0 / 60.0).epsilon(1e-12));

  const UnlocodeRecord* mvd = find("UY", "MVD");
  REQUIRE(mvd != nullptr);
  REQUIRE(mvd->coords.has_value());
  CHECK(mvd->coords->lat == doctest::Approx(-(34.0 + 53.0 / 60.0)).epsilon(1e-12));
  CHECK(mvd->coords->lon == doctest::Approx(-(56.0 + 10.0 / 60.0)).epsilon(1e-12));

  const UnlocodeRecord* sao = find("BR", "SAO");
  REQUIRE(sao != nullptr);
  CHECK_FALSE(sao->coords.has_value());

  // Codes with digits stay as recorded.
  CHECK(find("BR", "2SP") != nullptr);
}

TEST_CASE("load_gazetteer wires every dataset together") {
  LoadStats stats;
  Gazetteer gaz = load_gazetteer(fixture_paths(), &stats);
  CHECK(stats.rows == 285);
  CHECK(stats.loaded == 280);
  CHECK(stats.skipped == 5);
  CHECK(gaz.cities.size() == 125);
  CHECK(gaz.airports.size() == 22);
  CHECK(gaz.admin1.size() == 79);
  CHECK(gaz.countries.size() == 16);
  CHECK(gaz.clli.size() == 14);
  CHECK(gaz.unlocode.size() == 19);
  CHECK(gaz.find_city(5809844) != nullptr);
  CHECK(gaz.find_city(123) == nullptr);
}

TEST_CASE("load_gazetteer throws on missing file") {
  GazetteerPaths paths;
  paths.cities = kFixtures + "/geonames/no_such_file.txt";
  CHECK_THROWS_AS(load_gazetteer(paths), std::runtime_error);
}

TEST_CASE("city grid nearest matches brute force") {
  const Gazetteer& gaz = fixture_gazetteer();
  CityGrid grid(gaz.cities);

  auto brute = [&](const GeoPoint& p, const std::string& cc) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    double best_km = 0.0;
    for (std::size_t i = 0; i < gaz.cities.size(); ++i) {
      const Location& loc = gaz.cities[i];
      if (!cc.empty() && loc.country_code != cc) continue;
      double d = haversine_km(p, loc.point());
      if (!best || d < best_km || (d == best_km && loc.id < gaz.cities[*best].id)) {
        best = i;
        best_km = d;
      }
    }
    return best;
  };

  GeoPoint probes[] = {
      {40.65010, -73.94958},   // Brooklyn
      {51.50853, -0.12574},    // central London
      {35.0, 135.0},           // near Osaka
      {-23.5, -46.6},          // near Sao Paulo
      {0.0, 0.0},              // gulf of Guinea, far from everything
      {47.60621, -122.33207},  // exactly on Seattle
      {64.0, -21.0},           // Iceland
  };
  std::string filters[] = {"", "US", "GB", "CA"};
  for (const auto& p : probes) {
    for (const auto& cc : filters) {
      auto got = grid.nearest(p, cc);
      auto want = brute(p, cc);
      REQUIRE(got.has_value() == want.has_value());
      if (got) CHECK(gaz.cities[*got].id == gaz.cities[*want].id);
    }
  }
}

TEST_CASE("city grid resolves brooklyn to new york city") {
  const Gazetteer& gaz = fixture_gazetteer();
  CityGrid grid(gaz.cities);
  auto idx = grid.nearest(GeoPoint{40.65010, -73.94958}, "US");
  REQUIRE(idx.has_value());
  CHECK(gaz.cities[*idx].id == 5128581);
}

TEST_CASE("city grid with impossible filter returns nothing") {
  const Gazetteer& gaz = fixture_gazetteer();
  CityGrid grid(gaz.cities);
  CHECK_FALSE(grid.nearest(GeoPoint{40.0, -74.0}, "ZZ").has_value());
}

TEST_CASE("city grid on empty gazetteer returns nothing") {
  std::vector<Location> empty;
  CityGrid grid(empty);
  CHECK_FALSE(grid.nearest(GeoPoint{0.0, 0.0}, "").has_value());
}
