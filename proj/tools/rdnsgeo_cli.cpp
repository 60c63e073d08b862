#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdnsgeo/candidate_index.hpp"
#include "rdnsgeo/classifier.hpp"
#include "rdnsgeo/corpus.hpp"
#include "rdnsgeo/evaluation.hpp"
#include "rdnsgeo/gazetteer.hpp"
#include "rdnsgeo/host_patterns.hpp"
#include "rdnsgeo/splitter.hpp"
#include "rdnsgeo/strings.hpp"
#include "rdnsgeo/suffix_set.hpp"

namespace {

using namespace rdnsgeo;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

bool file_exists(const std::string& path) {
  std::ifstream f(path);
  return f.good();
}

std::string data_dir_default(const std::string& leaf) {
  const char* env = std::getenv("RDNS_GEO_DATA");
  if (env == nullptr || *env == '\0') return {};
  std::string path = std::string(env) + "/" + leaf;
  return path;
}

CorpusFormat parse_format(const std::string& name) {
  if (name == "csv") return CorpusFormat::kCsv;
  if (name == "rapid7") return CorpusFormat::kRapid7JsonLines;
  throw std::runtime_error("unknown corpus format: " + name +
                           " (expected csv or rapid7)");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to " + path);
  return out;
}

// Labeled hosts for mining and training: valid hostnames with coordinates.
std::vector<TrainingHost> load_training_hosts(const std::string& path,
                                              CorpusFormat format,
                                              const CandidateIndex& index,
                                              std::size_t* dropped_out = nullptr) {
  std::size_t malformed = 0;
  std::vector<CorpusRecord> records = read_corpus(path, format, &malformed);
  std::vector<TrainingHost> hosts;
  std::size_t dropped = malformed;
  for (const CorpusRecord& rec : records) {
    if (!rec.truth.has_value() ||
        !validate_hostname(rec.hostname, index.suffixes())) {
      ++dropped;
      continue;
    }
    TrainingHost host;
    host.split = split_hostname(rec.hostname, index.suffixes(), index.blacklist());
    host.truth = *rec.truth;
    hosts.push_back(std::move(host));
  }
  if (dropped_out != nullptr) *dropped_out = dropped;
  return hosts;
}

struct BuildIndexArgs {
  std::string geonames;
  std::string clli;
  std::string unlocode;
  std::string psl;
  std::string blacklist;
  std::string out;
  std::int64_t min_population = 10000;
};

int run_build_index(const BuildIndexArgs& args) {
  GazetteerPaths paths;
  for (const char* name : {"cities1000.txt", "cities500.txt", "cities15000.txt",
                           "cities.txt"}) {
    std::string candidate = args.geonames + "/" + name;
    if (file_exists(candidate)) {
      paths.cities = candidate;
      break;
    }
  }
  if (paths.cities.empty()) {
    throw std::runtime_error("no cities table found under " + args.geonames);
  }
  for (const char* name : {"alternateNames.txt", "alternateNamesV2.txt"}) {
    std::string candidate = args.geonames + "/" + name;
    if (file_exists(candidate)) {
      paths.alternate_names = candidate;
      break;
    }
  }
  if (std::string p = args.geonames + "/admin1CodesASCII.txt"; file_exists(p)) {
    paths.admin1 = p;
  }
  if (std::string p = args.geonames + "/countryInfo.txt"; file_exists(p)) {
    paths.country_info = p;
  }
  paths.clli = args.clli;
  paths.unlocode = args.unlocode;

  LoadStats stats;
  Gazetteer gaz = load_gazetteer(paths, &stats);
  SuffixSet suffixes = load_public_suffixes_file(args.psl);
  TermBlacklist blacklist = args.blacklist.empty()
                                ? TermBlacklist::defaults()
                                : TermBlacklist::load_file(args.blacklist);

  IndexBuildOptions opts;
  opts.min_population_for_derived = args.min_population;
  CandidateIndex index = CandidateIndex::build(gaz, std::move(suffixes),
                                               std::move(blacklist), opts);
  index.save_file(args.out);

  std::cout << "cities: " << gaz.cities.size() << "\n"
            << "airport codes: " << gaz.airports.size() << "\n"
            << "admin regions: " << gaz.admin1.size() << "\n"
            << "countries: " << gaz.countries.size() << "\n"
            << "suffix rules: " << index.suffixes().rule_count() << "\n"
            << "rows skipped: " << stats.skipped << "\n"
            << "index keys: " << index.key_count() << "\n";
  return kExitOk;
}

int run_mine_patterns(const std::string& corpus, const std::string& format_name,
                      const std::string& index_path, const std::string& out,
                      const MiningParams& params) {
  CandidateIndex index = CandidateIndex::load_file(index_path);
  std::size_t dropped = 0;
  std::vector<TrainingHost> hosts =
      load_training_hosts(corpus, parse_format(format_name), index, &dropped);
  if (hosts.empty()) {
    throw std::runtime_error("no usable training hosts in " + corpus);
  }
  PatternRuleSet rules = mine_patterns(hosts, index, params);
  rules.save_file(out);
  std::cout << "hosts: " << hosts.size() << "\n"
            << "hosts dropped: " << dropped << "\n"
            << "domains with rules: " << rules.by_domain().size() << "\n"
            << "rules: " << rules.size() << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string corpus;
  std::string format_name = "csv";
  std::string index_path;
  std::string patterns;
  std::string out;
  SamplingParams sampling;
  TrainParams train;
  double positive_radius_km = 20.0;
  bool no_sampling = false;
};

int run_train(const TrainArgs& args) {
  CandidateIndex index = CandidateIndex::load_file(args.index_path);
  PatternRuleSet rules;
  bool have_rules = !args.patterns.empty();
  if (have_rules) rules = PatternRuleSet::load_file(args.patterns);

  std::size_t dropped = 0;
  std::vector<TrainingHost> hosts = load_training_hosts(
      args.corpus, parse_format(args.format_name), index, &dropped);
  std::vector<LabeledPair> pairs = label_pairs(
      hosts, index, have_rules ? &rules : nullptr, args.positive_radius_km);
  std::vector<LabeledPair> sampled =
      args.no_sampling ? pairs : sample_pairs(pairs, args.sampling);

  Model model = train_model(sampled, args.train, args.sampling,
                            args.positive_radius_km);
  model.save_file(args.out);

  std::size_t positives = 0;
  for (const LabeledPair& p : sampled) positives += p.label ? 1 : 0;
  std::cout << "hosts: " << hosts.size() << "\n"
            << "hosts dropped: " << dropped << "\n"
            << "pairs: " << pairs.size() << "\n"
            << "pairs sampled: " << sampled.size() << "\n"
            << "positives sampled: " << positives << "\n"
            << "final loss: "
            << logistic_loss(sampled, model.weights, model.bias, args.train.l2)
            << "\n";
  return kExitOk;
}

int run_geolocate(const std::string& model_path, const std::string& index_path,
                  const std::string& patterns, std::size_t top,
                  const std::vector<std::string>& hostnames) {
  CandidateIndex index = CandidateIndex::load_file(index_path);
  Model model = Model::load_file(model_path);
  PatternRuleSet rules;
  bool have_rules = !patterns.empty();
  if (have_rules) rules = PatternRuleSet::load_file(patterns);

  int exit_code = kExitOk;
  std::cout << "rank\tcity\tadmin1\tcountry\tlat\tlon\tconfidence\n";
  char buf[96];
  for (const std::string& hostname : hostnames) {
    std::cout << "# " << hostname << "\n";
    std::vector<RankedLocation> ranked;
    try {
      ranked = geolocate(model, hostname, index, have_rules ? &rules : nullptr);
    } catch (const SplitError& e) {
      std::cerr << hostname << ": " << e.what() << "\n";
      exit_code = kExitData;
      continue;
    }
    std::size_t rank = 0;
    for (const RankedLocation& r : ranked) {
      if (++rank > top) break;
      std::snprintf(buf, sizeof(buf), "%.5f\t%.5f\t%.6f", r.location.lat,
                    r.location.lon, r.confidence);
      std::cout << rank << '\t' << r.location.name << '\t'
                << r.location.admin1_code << '\t' << r.location.country_code
                << '\t' << buf << "\n";
    }
  }
  return exit_code;
}

int run_evaluate(const std::string& model_path, const std::string& index_path,
                 const std::string& patterns, const std::string& test_path,
                 const std::string& format_name, const std::string& report_csv,
                 const std::string& cdf_tsv, std::vector<double> thresholds) {
  CandidateIndex index = CandidateIndex::load_file(index_path);
  Model model = Model::load_file(model_path);
  PatternRuleSet rules;
  bool have_rules = !patterns.empty();
  if (have_rules) rules = PatternRuleSet::load_file(patterns);

  std::size_t malformed = 0;
  std::vector<CorpusRecord> records =
      read_corpus(test_path, parse_format(format_name), &malformed);
  std::vector<TestRecord> tests;
  for (const CorpusRecord& rec : records) {
    if (!rec.truth.has_value()) continue;
    tests.push_back(TestRecord{rec.hostname, *rec.truth});
  }
  if (tests.empty()) {
    throw std::runtime_error("no test records with coordinates in " + test_path);
  }

  const PatternRuleSet* rule_ptr = have_rules ? &rules : nullptr;
  auto decide = [&](const std::string& hostname) -> std::optional<GeoPoint> {
    std::vector<RankedLocation> ranked;
    try {
      ranked = geolocate(model, hostname, index, rule_ptr);
    } catch (const SplitError&) {
      return std::nullopt;
    }
    if (ranked.empty()) return std::nullopt;
    return GeoPoint{ranked.front().location.lat, ranked.front().location.lon};
  };
  auto domain_of = [&](const std::string& hostname) -> std::string {
    try {
      return split_hostname(hostname, index.suffixes(), index.blacklist()).domain;
    } catch (const SplitError&) {
      return "(invalid)";
    }
  };

  if (thresholds.empty()) thresholds = default_cdf_thresholds();
  EvalReport report = evaluate(tests, decide, domain_of, thresholds);
  if (!report_csv.empty()) {
    std::ofstream out = open_output(report_csv);
    write_report_csv(report, out);
  }
  if (!cdf_tsv.empty()) {
    std::ofstream out = open_output(cdf_tsv);
    write_cdf_tsv(report, out);
  }

  const GroupStats& o = report.overall;
  std::cout << "hostnames: " << o.total << "\n"
            << "decided: " << o.decided << "\n"
            << "coverage: " << o.coverage << "\n"
            << "median error km: " << o.median_error_km << "\n"
            << "rmse km: " << o.rmse_km << "\n"
            << "combined score: " << o.combined_score << "\n";
  return kExitOk;
}

int run_analyze(const std::string& corpus, const std::string& format_name,
                const std::string& index_path) {
  CandidateIndex index = CandidateIndex::load_file(index_path);
  CorpusReader reader(corpus, parse_format(format_name));
  CorpusStats stats = analyze_corpus(reader, index);
  write_stats(stats, std::cout);
  return kExitOk;
}

int run_generate(const std::string& index_path, const SyntheticOptions& options,
                 const std::string& out, const std::string& manifest) {
  CandidateIndex index = CandidateIndex::load_file(index_path);
  std::vector<SyntheticRecord> records = generate_synthetic(index, options);
  {
    std::ofstream f = open_output(out);
    write_corpus_csv(records, f);
  }
  if (!manifest.empty()) {
    std::ofstream f = open_output(manifest);
    write_manifest_csv(records, f);
  }
  std::size_t decoys = 0;
  for (const SyntheticRecord& r : records) decoys += r.decoy ? 1 : 0;
  std::cout << "records: " << records.size() << "\n"
            << "decoys: " << decoys << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse DNS hostname geolocation toolkit"};
  app.require_subcommand(1);

  BuildIndexArgs bi;
  bi.geonames = data_dir_default("geonames");
  bi.psl = data_dir_default("public_suffix_list.dat");
  if (std::string p = data_dir_default("clli.csv"); file_exists(p)) bi.clli = p;
  if (std::string p = data_dir_default("unlocode.csv"); file_exists(p)) {
    bi.unlocode = p;
  }
  auto* cmd_bi = app.add_subcommand("build-index",
                                    "Build the candidate index from gazetteer data");
  cmd_bi->add_option("--geonames", bi.geonames, "GeoNames directory")
      ->required(bi.geonames.empty());
  cmd_bi->add_option("--clli", bi.clli, "CLLI code CSV");
  cmd_bi->add_option("--unlocode", bi.unlocode, "UN/LOCODE CSV");
  cmd_bi->add_option("--psl", bi.psl, "public suffix list file")
      ->required(bi.psl.empty());
  cmd_bi->add_option("--blacklist", bi.blacklist, "term blacklist file");
  cmd_bi->add_option("--min-population", bi.min_population,
                     "population floor for derived name variants");
  cmd_bi->add_option("--out", bi.out, "output index file")->required();

  std::string mp_corpus, mp_format = "csv", mp_index, mp_out;
  MiningParams mp_params;
  auto* cmd_mp = app.add_subcommand("mine-patterns",
                                    "Mine per-domain host patterns from a corpus");
  cmd_mp->add_option("--corpus", mp_corpus, "labeled corpus file")->required();
  cmd_mp->add_option("--format", mp_format, "corpus format (csv, rapid7)");
  cmd_mp->add_option("--index", mp_index, "candidate index file")->required();
  cmd_mp->add_option("--min-support-ratio", mp_params.min_support_ratio,
                     "minimum in-radius fraction for a rule");
  cmd_mp->add_option("--radius-km", mp_params.radius_km, "rule support radius");
  cmd_mp->add_option("--min-examples", mp_params.min_examples,
                     "minimum occurrences per pattern");
  cmd_mp->add_option("--out", mp_out, "output rule file")->required();

  TrainArgs tr;
  auto* cmd_tr = app.add_subcommand("train", "Train the candidate classifier");
  cmd_tr->add_option("--corpus", tr.corpus, "labeled corpus file")->required();
  cmd_tr->add_option("--format", tr.format_name, "corpus format (csv, rapid7)");
  cmd_tr->add_option("--index", tr.index_path, "candidate index file")->required();
  cmd_tr->add_option("--patterns", tr.patterns, "mined pattern rules file");
  cmd_tr->add_option("--max-per-domain", tr.sampling.max_per_domain,
                     "pair cap per domain");
  cmd_tr->add_option("--max-category-ratio", tr.sampling.max_category_ratio,
                     "max primary-category occurrence ratio");
  cmd_tr->add_option("--max-negative-ratio", tr.sampling.max_negative_ratio,
                     "max negatives per positive");
  cmd_tr->add_option("--seed", tr.sampling.seed, "sampling seed");
  cmd_tr->add_option("--epochs", tr.train.epochs, "gradient descent epochs");
  cmd_tr->add_option("--learning-rate", tr.train.learning_rate, "learning rate");
  cmd_tr->add_option("--l2", tr.train.l2, "L2 penalty on weights");
  cmd_tr->add_option("--positive-radius-km", tr.positive_radius_km,
                     "label radius around the true location");
  cmd_tr->add_flag("--no-sampling", tr.no_sampling,
                   "train on every labeled pair");
  cmd_tr->add_option("--out", tr.out, "output model file")->required();

  std::string gl_model, gl_index, gl_patterns;
  std::size_t gl_top = 5;
  std::vector<std::string> gl_hostnames;
  auto* cmd_gl = app.add_subcommand("geolocate", "Rank locations for hostnames");
  cmd_gl->add_option("--model", gl_model, "model file")->required();
  cmd_gl->add_option("--index", gl_index, "candidate index file")->required();
  cmd_gl->add_option("--patterns", gl_patterns, "mined pattern rules file");
  cmd_gl->add_option("--top", gl_top, "rows per hostname");
  cmd_gl->add_option("hostnames", gl_hostnames, "hostnames to locate")->required();

  std::string ev_model, ev_index, ev_patterns, ev_test, ev_format = "csv";
  std::string ev_report, ev_cdf;
  std::vector<double> ev_thresholds;
  auto* cmd_ev = app.add_subcommand("evaluate", "Score a model on a labeled corpus");
  cmd_ev->add_option("--model", ev_model, "model file")->required();
  cmd_ev->add_option("--index", ev_index, "candidate index file")->required();
  cmd_ev->add_option("--patterns", ev_patterns, "mined pattern rules file");
  cmd_ev->add_option("--test", ev_test, "labeled test corpus")->required();
  cmd_ev->add_option("--format", ev_format, "corpus format (csv, rapid7)");
  cmd_ev->add_option("--report-csv", ev_report, "per-domain report output");
  cmd_ev->add_option("--cdf-tsv", ev_cdf, "error CDF output");
  cmd_ev->add_option("--thresholds", ev_thresholds, "CDF thresholds in km");

  std::string an_corpus, an_format = "csv", an_index;
  auto* cmd_an = app.add_subcommand("analyze", "Summarize a hostname corpus");
  cmd_an->add_option("--corpus", an_corpus, "corpus file")->required();
  cmd_an->add_option("--format", an_format, "corpus format (csv, rapid7)");
  cmd_an->add_option("--index", an_index, "candidate index file")->required();

  SyntheticOptions gs;
  std::string gs_index, gs_out, gs_manifest;
  auto* cmd_gs = app.add_subcommand("generate-synthetic",
                                    "Generate a labeled synthetic corpus");
  cmd_gs->add_option("--index", gs_index, "candidate index file")->required();
  cmd_gs->add_option("--domains", gs.domains, "number of domains");
  cmd_gs->add_option("--hosts-per-domain", gs.hosts_per_domain,
                     "hostnames per domain");
  cmd_gs->add_option("--decoy-fraction", gs.decoy_fraction,
                     "fraction of decoy-only hostnames");
  cmd_gs->add_option("--seed", gs.seed, "generator seed");
  cmd_gs->add_option("--schemes", gs.schemes, "subset of naming schemes");
  cmd_gs->add_option("--out", gs_out, "output corpus CSV")->required();
  cmd_gs->add_option("--manifest", gs_manifest, "ground-truth manifest CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_bi->parsed()) return run_build_index(bi);
    if (cmd_mp->parsed()) {
      return run_mine_patterns(mp_corpus, mp_format, mp_index, mp_out, mp_params);
    }
    if (cmd_tr->parsed()) return run_train(tr);
    if (cmd_gl->parsed()) {
      return run_geolocate(gl_model, gl_index, gl_patterns, gl_top, gl_hostnames);
    }
    if (cmd_ev->parsed()) {
      return run_evaluate(ev_model, ev_index, ev_patterns, ev_test, ev_format,
                          ev_report, ev_cdf, ev_thresholds);
    }
    if (cmd_an->parsed()) return run_analyze(an_corpus, an_format, an_index);
    if (cmd_gs->parsed()) return run_generate(gs_index, gs, gs_out, gs_manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
