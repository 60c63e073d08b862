#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdnsgeo/geo.hpp"

namespace rdnsgeo {

struct TestRecord {
  std::string hostname;
  GeoPoint truth;
};

struct ThresholdFraction {
  double threshold_km = 0.0;
  double fraction = 0.0;
};

struct GroupStats {
  std::string domain;  // "(overall)" for the aggregate row
  std::size_t total = 0;
  std::size_t decided = 0;
  double median_error_km = 0.0;
  double rmse_km = 0.0;
  double coverage = 0.0;
  double combined_score = 0.0;
  std::vector<ThresholdFraction> cdf;
};

struct EvalReport {
  std::vector<GroupStats> per_domain;
  GroupStats overall;
};

inline const std::vector<double>& default_cdf_thresholds() {
  static const std::vector<double> t{20, 40, 60, 100, 250, 500, 1000};
  return t;
}

// (1000 / rmse_km) * coverage; +inf when rmse is 0 with decisions made.
double combined_score(double rmse_km, double coverage);

// Lower median: for even counts the smaller of the two middle values.
double lower_median(std::vector<double> values);

// Fraction of all `total` hostnames with error strictly below each
// threshold; undecided hostnames have no error and never fall below one.
std::vector<ThresholdFraction> error_cdf(const std::vector<double>& errors_km,
                                         std::size_t total,
                                         const std::vector<double>& thresholds);

using DecideFn = std::function<std::optional<GeoPoint>(const std::string& hostname)>;
using DomainFn = std::function<std::string(const std::string& hostname)>;

// Runs decide over every record; undecided hostnames count against
// coverage and are excluded from the error statistics. Throws
// std::invalid_argument on an empty corpus.
EvalReport evaluate(const std::vector<TestRecord>& corpus, const DecideFn& decide,
                    const DomainFn& domain_of,
                    const std::vector<double>& thresholds = default_cdf_thresholds());

// Per-domain rows followed by the overall row.
void write_report_csv(const EvalReport& report, std::ostream& out);

// threshold_km<TAB>fraction rows for the overall CDF.
void write_cdf_tsv(const EvalReport& report, std::ostream& out);

}  // namespace rdnsgeo
