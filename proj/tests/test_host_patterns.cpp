#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "rdnsgeo/host_patterns.hpp"
#include "rdnsgeo/serial.hpp"
#include "rdnsgeo/strings.hpp"

using namespace rdnsgeo;

namespace {

const std::string kFixtures = FIXTURES_DIR;

const CandidateIndex& fixture_index() {
  static CandidateIndex index = [] {
    GazetteerPaths paths;
    paths.cities = kFixtures + "/geonames/cities1000.txt";
    paths.alternate_names = kFixtures + "/geonames/alternateNames.txt";
    paths.admin1 = kFixtures + "/geonames/admin1CodesASCII.txt";
    paths.country_info = kFixtures + "/geonames/countryInfo.txt";
    paths.clli = kFixtures + "/clli.csv";
    paths.unlocode = kFixtures + "/unlocode.csv";
    Gazetteer gaz = load_gazetteer(paths);
    SuffixSet psl = load_public_suffixes_file(kFixtures + "/public_suffix_list.dat");
    return CandidateIndex::build(gaz, std::move(psl), TermBlacklist::defaults());
  }();
  return index;
}

SplitHostname do_split(const std::string& host) {
  return split_hostname(host, fixture_index().suffixes(), fixture_index().blacklist());
}

TrainingHost make_host(const std::string& hostname, double lat, double lon) {
  return TrainingHost{do_split(hostname), GeoPoint{lat, lon}};
}

constexpr double kToulonLat = 43.12442;
constexpr double kToulonLon = 5.92836;
constexpr double kSalemLat = 44.94290;
constexpr double kSalemLon = -123.03510;

const PatternRule* find_rule(const PatternRuleSet& set, const std::string& domain,
                             const std::vector<PatternSlot>& slots) {
  const auto* rules = set.rules_for(domain);
  if (!rules) return nullptr;
  for (const PatternRule& r : *rules) {
    if (r.slots == slots) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("mining finds a single-slot rule from clustered hosts") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 8; ++i) {
    corpus.push_back(make_host("node" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat + 0.01 * i, kToulonLon));
  }
  corpus.push_back(make_host("node8.abo.wanadoo.fr", 48.85341, 2.34880));  // Paris
  corpus.push_back(make_host("node9.abo.wanadoo.fr", 48.86000, 2.35000));

  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  const PatternRule* rule = find_rule(rules, "wanadoo.fr", {{"abo", 1}});
  REQUIRE(rule != nullptr);
  CHECK(rule->location_id == 2972191);  // Toulon
  CHECK(rule->support_count == 8);
  CHECK(rule->support_ratio == doctest::Approx(0.8));

  // The varying left terms never have enough occurrences on their own.
  CHECK(find_rule(rules, "wanadoo.fr", {{"node0", 2}}) == nullptr);
}

TEST_CASE("mining finds two-slot rules with ascending positions") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 12; ++i) {
    corpus.push_back(make_host("h" + std::to_string(i) + ".mmvl.or.frontiernet.net",
                               kSalemLat, kSalemLon));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());

  const PatternRule* pair = find_rule(rules, "frontiernet.net", {{"or", 1}, {"mmvl", 2}});
  REQUIRE(pair != nullptr);
  CHECK(pair->location_id == 5756304);  // Salem
  CHECK(pair->support_count == 12);
  CHECK(pair->support_ratio == doctest::Approx(1.0));

  CHECK(find_rule(rules, "frontiernet.net", {{"or", 1}}) != nullptr);
  CHECK(find_rule(rules, "frontiernet.net", {{"mmvl", 2}}) != nullptr);
}

TEST_CASE("support below the ratio threshold yields no rule") {
  std::vector<TrainingHost> corpus;
  // Three tight occurrences at Toulon, seven scattered worldwide.
  for (int i = 0; i < 3; ++i) {
    corpus.push_back(make_host("x" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat, kToulonLon));
  }
  double far[][2] = {{35.6, 139.7}, {-33.8, 151.2}, {-23.5, -46.6}, {51.5, -0.1},
                     {40.7, -74.0}, {55.7, 37.6},   {19.4, -99.1}};
  for (int i = 0; i < 7; ++i) {
    corpus.push_back(make_host("y" + std::to_string(i) + ".abo.wanadoo.fr",
                               far[i][0], far[i][1]));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  CHECK(find_rule(rules, "wanadoo.fr", {{"abo", 1}}) == nullptr);
}

TEST_CASE("support ratio exactly at the threshold yields a rule") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 4; ++i) {
    corpus.push_back(make_host("x" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat, kToulonLon));
  }
  double far[][2] = {{35.6, 139.7}, {-33.8, 151.2}, {-23.5, -46.6},
                     {51.5, -0.1},  {40.7, -74.0},  {19.4, -99.1}};
  for (int i = 0; i < 6; ++i) {
    corpus.push_back(make_host("y" + std::to_string(i) + ".abo.wanadoo.fr",
                               far[i][0], far[i][1]));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  const PatternRule* rule = find_rule(rules, "wanadoo.fr", {{"abo", 1}});
  REQUIRE(rule != nullptr);
  CHECK(rule->support_count == 4);
  CHECK(rule->support_ratio == doctest::Approx(0.4));
  CHECK(rule->location_id == 2972191);
}

TEST_CASE("fewer occurrences than min_examples yields no rule") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 9; ++i) {
    corpus.push_back(make_host("x" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat, kToulonLon));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  CHECK(find_rule(rules, "wanadoo.fr", {{"abo", 1}}) == nullptr);

  MiningParams loose;
  loose.min_examples = 5;
  PatternRuleSet relaxed = mine_patterns(corpus, fixture_index(), loose);
  CHECK(find_rule(relaxed, "wanadoo.fr", {{"abo", 1}}) != nullptr);
}

TEST_CASE("the medoid sits inside the dominant cluster") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 6; ++i) {
    corpus.push_back(make_host("c" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat, kToulonLon));
  }
  for (int i = 0; i < 5; ++i) {
    corpus.push_back(make_host("d" + std::to_string(i) + ".abo.wanadoo.fr",
                               kSalemLat, kSalemLon));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  const PatternRule* rule = find_rule(rules, "wanadoo.fr", {{"abo", 1}});
  REQUIRE(rule != nullptr);
  CHECK(rule->location_id == 2972191);
  CHECK(rule->support_count == 6);
  CHECK(rule->support_ratio == doctest::Approx(6.0 / 11.0));
}

TEST_CASE("mining over the strided medoid subsample stays deterministic") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 30; ++i) {
    corpus.push_back(make_host("h" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat + 0.001 * i, kToulonLon));
  }
  MiningParams params;
  params.exact_medoid_limit = 10;
  params.medoid_sample = 5;
  PatternRuleSet a = mine_patterns(corpus, fixture_index(), params);
  PatternRuleSet b = mine_patterns(corpus, fixture_index(), params);

  const PatternRule* ra = find_rule(a, "wanadoo.fr", {{"abo", 1}});
  const PatternRule* rb = find_rule(b, "wanadoo.fr", {{"abo", 1}});
  REQUIRE(ra != nullptr);
  REQUIRE(rb != nullptr);
  CHECK(ra->location_id == rb->location_id);
  CHECK(ra->support_count == rb->support_count);
  CHECK(ra->support_count == 30);
  CHECK(ra->location_id == 2972191);
}

TEST_CASE("rules from different domains never mix") {
  std::vector<TrainingHost> corpus;
  for (int i = 0; i < 10; ++i) {
    corpus.push_back(make_host("n" + std::to_string(i) + ".abo.wanadoo.fr",
                               kToulonLat, kToulonLon));
  }
  for (int i = 0; i < 10; ++i) {
    corpus.push_back(make_host("n" + std::to_string(i) + ".abo.orange.fr",
                               kSalemLat, kSalemLon));
  }
  PatternRuleSet rules = mine_patterns(corpus, fixture_index());
  const PatternRule* wanadoo = find_rule(rules, "wanadoo.fr", {{"abo", 1}});
  const PatternRule* orange = find_rule(rules, "orange.fr", {{"abo", 1}});
  REQUIRE(wanadoo != nullptr);
  REQUIRE(orange != nullptr);
  CHECK(wanadoo->location_id == 2972191);
  CHECK(orange->location_id == 5756304);
}

TEST_CASE("apply_patterns matches slots positionally from the right") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "wanadoo.fr";
  rule.slots = {{"abo", 1}};
  rule.location_id = 2972191;
  rule.support_count = 8;
  rule.support_ratio = 0.8;
  rules.add(rule);

  auto hits = apply_patterns(rules, do_split("atoulon-651-1-29-109.abo.wanadoo.fr"),
                             fixture_index());
  REQUIRE(hits.size() == 1);
  CHECK(fixture_index().location(hits[0].location_idx).id == 2972191);
  CHECK(hits[0].matched_letters == 3);
  CHECK(hits[0].slot_terms == std::vector<std::string>{"abo"});

  // Same term at the wrong position does not match.
  CHECK(apply_patterns(rules, do_split("abo.node1.wanadoo.fr"), fixture_index()).empty());
  // Other domains are untouched.
  CHECK(apply_patterns(rules, do_split("x.abo.orange.fr"), fixture_index()).empty());
}

TEST_CASE("two-slot rules are conjunctions") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "frontiernet.net";
  rule.slots = {{"or", 1}, {"mmvl", 2}};
  rule.location_id = 5756304;
  rule.support_count = 12;
  rule.support_ratio = 1.0;
  rules.add(rule);

  auto hits = apply_patterns(rules, do_split("static-50-126-80-6.mmvl.or.frontiernet.net"),
                             fixture_index());
  REQUIRE(hits.size() == 1);
  CHECK(fixture_index().location(hits[0].location_idx).id == 5756304);
  CHECK(hits[0].matched_letters == 6);
  CHECK(hits[0].slot_terms == std::vector<std::string>{"mmvl", "or"});

  CHECK(apply_patterns(rules, do_split("x.mmvl.wa.frontiernet.net"), fixture_index())
            .empty());
  CHECK(apply_patterns(rules, do_split("x.seaw.or.frontiernet.net"), fixture_index())
            .empty());
}

TEST_CASE("hits on the same location keep the longest match") {
  PatternRuleSet rules;
  PatternRule short_rule;
  short_rule.domain = "wanadoo.fr";
  short_rule.slots = {{"abo", 1}};
  short_rule.location_id = 2972191;
  rules.add(short_rule);
  PatternRule long_rule;
  long_rule.domain = "wanadoo.fr";
  long_rule.slots = {{"abo", 1}, {"toulon", 2}};
  long_rule.location_id = 2972191;
  rules.add(long_rule);

  auto hits = apply_patterns(rules, do_split("node1.toulon.abo.wanadoo.fr"),
                             fixture_index());
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].matched_letters == 9);
  CHECK(hits[0].slot_terms == std::vector<std::string>{"abo", "toulon"});
}

TEST_CASE("rules pointing at unknown locations are skipped") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "wanadoo.fr";
  rule.slots = {{"abo", 1}};
  rule.location_id = 999999999;
  rules.add(rule);
  CHECK(apply_patterns(rules, do_split("x.abo.wanadoo.fr"), fixture_index()).empty());
}

TEST_CASE("generate_candidates merges pattern hits into the lookup") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "wanadoo.fr";
  rule.slots = {{"abo", 1}};
  rule.location_id = 2972191;
  rules.add(rule);

  SplitHostname split = do_split("atoulon-651-1-29-109.abo.wanadoo.fr");
  auto candidates = generate_candidates(fixture_index(), &rules, split);

  const CandidateMatch* toulon = nullptr;
  for (const auto& c : candidates) {
    if (fixture_index().location(c.location_idx).id == 2972191) toulon = &c;
  }
  REQUIRE(toulon != nullptr);
  CHECK(toulon->matched(PrimaryCategory::kHostPatterns));
  const auto& t =
      toulon->categories[static_cast<std::size_t>(PrimaryCategory::kHostPatterns)];
  CHECK(t.population == 168701);
  CHECK(t.matched_letters == 3);
  CHECK(std::count(toulon->matched_terms.begin(), toulon->matched_terms.end(), "abo") == 1);
}

TEST_CASE("pattern hits fold into existing index candidates") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "wanadoo.fr";
  rule.slots = {{"abo", 1}};
  rule.location_id = 2972191;
  rules.add(rule);

  SplitHostname split = do_split("toulon.abo.wanadoo.fr");
  auto candidates = generate_candidates(fixture_index(), &rules, split);

  int toulon_count = 0;
  const CandidateMatch* toulon = nullptr;
  for (const auto& c : candidates) {
    if (fixture_index().location(c.location_idx).id == 2972191) {
      ++toulon_count;
      toulon = &c;
    }
  }
  CHECK(toulon_count == 1);
  REQUIRE(toulon != nullptr);
  CHECK(toulon->matched(PrimaryCategory::kCityName));
  CHECK(toulon->matched(PrimaryCategory::kHostPatterns));
  CHECK(toulon->matched_terms == std::vector<std::string>{"abo", "toulon"});
}

TEST_CASE("generate_candidates without rules is a plain lookup") {
  SplitHostname split = do_split("toulon.abo.wanadoo.fr");
  auto with_null = generate_candidates(fixture_index(), nullptr, split);
  auto direct = fixture_index().lookup(split.pruned_term_strings());
  REQUIRE(with_null.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(with_null[i].location_idx == direct[i].location_idx);
    CHECK_FALSE(with_null[i].matched(PrimaryCategory::kHostPatterns));
  }
}

TEST_CASE("generate_candidates orders by location id") {
  PatternRuleSet rules;
  PatternRule rule;
  rule.domain = "wanadoo.fr";
  rule.slots = {{"abo", 1}};
  rule.location_id = 2972191;
  rules.add(rule);

  SplitHostname split = do_split("roch.abo.wanadoo.fr");
  auto candidates = generate_candidates(fixture_index(), &rules, split);
  REQUIRE(candidates.size() >= 5);
  std::vector<std::int64_t> ids;
  for (const auto& c : candidates) {
    ids.push_back(fixture_index().location(c.location_idx).id);
  }
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(std::count(ids.begin(), ids.end(), 2972191) == 1);
  CHECK(std::count(ids.begin(), ids.end(), 5134086) == 1);
}

TEST_CASE("rule set accessors") {
  PatternRuleSet rules;
  CHECK(rules.size() == 0);
  CHECK(rules.rules_for("wanadoo.fr") == nullptr);

  PatternRule a;
  a.domain = "wanadoo.fr";
  a.slots = {{"abo", 1}};
  a.location_id = 2972191;
  rules.add(a);
  PatternRule b;
  b.domain = "wanadoo.fr";
  b.slots = {{"tln", 2}};
  b.location_id = 2972191;
  rules.add(b);
  PatternRule c;
  c.domain = "frontiernet.net";
  c.slots = {{"or", 1}, {"mmvl", 2}};
  c.location_id = 5756304;
  rules.add(c);

  CHECK(rules.size() == 3);
  REQUIRE(rules.rules_for("wanadoo.fr") != nullptr);
  CHECK(rules.rules_for("wanadoo.fr")->size() == 2);
  CHECK(rules.by_domain().size() == 2);
}

TEST_CASE("pattern rules roundtrip through their file format") {
  PatternRuleSet rules;
  PatternRule a;
  a.domain = "wanadoo.fr";
  a.slots = {{"abo", 1}};
  a.location_id = 2972191;
  a.support_count = 8;
  a.support_ratio = 0.8;
  rules.add(a);
  PatternRule b;
  b.domain = "frontiernet.net";
  b.slots = {{"or", 1}, {"mmvl", 2}};
  b.location_id = 5756304;
  b.support_count = 12;
  b.support_ratio = 1.0;
  rules.add(b);

  std::ostringstream out;
  rules.save(out);
  std::istringstream in(out.str());
  PatternRuleSet loaded = PatternRuleSet::load(in);

  CHECK(loaded.size() == 2);
  const PatternRule* ra = find_rule(loaded, "wanadoo.fr", {{"abo", 1}});
  REQUIRE(ra != nullptr);
  CHECK(ra->location_id == 2972191);
  CHECK(ra->support_count == 8);
  CHECK(ra->support_ratio == doctest::Approx(0.8));

  const PatternRule* rb = find_rule(loaded, "frontiernet.net", {{"or", 1}, {"mmvl", 2}});
  REQUIRE(rb != nullptr);
  CHECK(rb->location_id == 5756304);
  CHECK(rb->support_ratio == doctest::Approx(1.0));
}

TEST_CASE("corrupted pattern files are rejected") {
  PatternRuleSet rules;
  PatternRule a;
  a.domain = "wanadoo.fr";
  a.slots = {{"abo", 1}};
  a.location_id = 2972191;
  rules.add(a);
  std::ostringstream out;
  rules.save(out);
  std::string bytes = out.str();

  SUBCASE("flipped byte") {
    bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x01);
    std::istringstream in(bytes);
    CHECK_THROWS_WITH_AS(PatternRuleSet::load(in), "pattern file checksum mismatch",
                         SerialError);
  }
  SUBCASE("truncated") {
    std::istringstream in(bytes.substr(0, 12));
    CHECK_THROWS_AS(PatternRuleSet::load(in), SerialError);
  }
  SUBCASE("wrong magic with a matching checksum") {
    std::string body = "NOTAPATT" + bytes.substr(8, 16);
    std::ostringstream forged;
    forged.write(body.data(), static_cast<std::streamsize>(body.size()));
    BinaryWriter w(forged);
    w.u64(fnv1a64(body));
    std::istringstream in(forged.str());
    CHECK_THROWS_WITH_AS(PatternRuleSet::load(in), "not a pattern file", SerialError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(PatternRuleSet::load_file("/nonexistent/rules.bin"), SerialError);
  }
}
