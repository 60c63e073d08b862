#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdnsgeo/candidate_index.hpp"
#include "rdnsgeo/geo.hpp"

namespace rdnsgeo {

enum class CorpusFormat {
  kCsv,
  kRapid7JsonLines,
};

struct CorpusRecord {
  std::string ip;
  std::string hostname;
  std::optional<GeoPoint> truth;
};

// Streams records from a plain or gzip-compressed corpus file. The CSV
// format is "ip,hostname,lat,lon" (header optional, coordinates optional);
// the Rapid7 format is one JSON object per line with "name" (the IP) and
// "value" (the hostname) fields. Lines that do not parse are counted
// instead of aborting the stream.
class CorpusReader {
 public:
  CorpusReader(const std::string& path, CorpusFormat format);
  ~CorpusReader();

  CorpusReader(const CorpusReader&) = delete;
  CorpusReader& operator=(const CorpusReader&) = delete;
  CorpusReader(CorpusReader&& other) noexcept;
  CorpusReader& operator=(CorpusReader&& other) noexcept;

  bool next(CorpusRecord& out);
  std::size_t malformed() const { return malformed_; }
  std::size_t lines_read() const { return lines_read_; }

 private:
  bool read_line(std::string& line);
  bool parse_csv(const std::string& line, CorpusRecord& out);
  bool parse_rapid7(const std::string& line, CorpusRecord& out);

  void* file_ = nullptr;
  CorpusFormat format_ = CorpusFormat::kCsv;
  std::size_t malformed_ = 0;
  std::size_t lines_read_ = 0;
  bool first_line_ = true;
};

bool parse_ipv4(const std::string& text);

std::vector<CorpusRecord> read_corpus(const std::string& path, CorpusFormat format,
                                      std::size_t* malformed = nullptr);

struct CorpusStats {
  std::size_t total = 0;
  std::size_t malformed = 0;
  std::size_t valid = 0;
  std::size_t distinct = 0;
  std::size_t with_truth = 0;
  std::size_t city_name_matches = 0;
  std::size_t airport_code_matches = 0;
  std::vector<std::pair<std::string, std::size_t>> tld_counts;
};

CorpusStats analyze_corpus(CorpusReader& reader, const CandidateIndex& index);
void write_stats(const CorpusStats& stats, std::ostream& out);

struct SyntheticOptions {
  std::size_t domains = 50;
  std::size_t hosts_per_domain = 2000;
  double decoy_fraction = 0.30;
  std::uint64_t seed = 1;
  // Empty means every scheme is enabled. Known scheme names: city, altname,
  // abbrev, cityadmin, citycountry, novowel, firstletters, airport, clli,
  // unlocode, pattern.
  std::vector<std::string> schemes;
};

struct SyntheticRecord {
  CorpusRecord record;
  std::string domain;
  std::string scheme;
  bool decoy = false;
  std::int64_t city_id = 0;
};

std::vector<SyntheticRecord> generate_synthetic(const CandidateIndex& index,
                                                const SyntheticOptions& options);

void write_corpus_csv(const std::vector<SyntheticRecord>& records, std::ostream& out);
void write_manifest_csv(const std::vector<SyntheticRecord>& records, std::ostream& out);

// Resolves PTR records for the given IPv4 addresses via the system
// resolver. Addresses that fail to resolve map to an empty hostname.
std::vector<std::pair<std::string, std::string>> resolve_ptr(
    const std::vector<std::string>& ips);

}  // namespace rdnsgeo
