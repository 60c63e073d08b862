#include "rdnsgeo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace rdnsgeo {

namespace {

GroupStats finish_group(std::string domain, std::size_t total,
                        std::vector<double> errors,
                        const std::vector<double>& thresholds) {
  GroupStats g;
  g.domain = std::move(domain);
  g.total = total;
  g.decided = errors.size();
  g.coverage = total == 0 ? 0.0
                          : static_cast<double>(g.decided) / static_cast<double>(total);
  if (!errors.empty()) {
    double sq = 0.0;
    for (double e : errors) sq += e * e;
    g.rmse_km = std::sqrt(sq / static_cast<double>(errors.size()));
    g.median_error_km = lower_median(errors);
  }
  g.combined_score = g.decided == 0 ? 0.0 : combined_score(g.rmse_km, g.coverage);
  g.cdf = error_cdf(errors, total, thresholds);
  return g;
}

double format_guard(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

double combined_score(double rmse_km, double coverage) {
  if (rmse_km == 0.0) return std::numeric_limits<double>::infinity();
  return (1000.0 / rmse_km) * coverage;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

std::vector<ThresholdFraction> error_cdf(const std::vector<double>& errors_km,
                                         std::size_t total,
                                         const std::vector<double>& thresholds) {
  std::vector<ThresholdFraction> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    std::size_t below = 0;
    for (double e : errors_km) {
      if (e < t) ++below;
    }
    double fraction =
        total == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(total);
    out.push_back(ThresholdFraction{t, fraction});
  }
  return out;
}

EvalReport evaluate(const std::vector<TestRecord>& corpus, const DecideFn& decide,
                    const DomainFn& domain_of, const std::vector<double>& thresholds) {
  if (corpus.empty()) throw std::invalid_argument("evaluation corpus is empty");

  struct Group {
    std::size_t total = 0;
    std::vector<double> errors;
  };
  std::map<std::string, Group> groups;
  Group overall;

  for (const TestRecord& rec : corpus) {
    Group& g = groups[domain_of(rec.hostname)];
    ++g.total;
    ++overall.total;
    std::optional<GeoPoint> decision = decide(rec.hostname);
    if (!decision) continue;
    double error = haversine_km(*decision, rec.truth);
    g.errors.push_back(error);
    overall.errors.push_back(error);
  }

  EvalReport report;
  for (auto& [domain, g] : groups) {
    report.per_domain.push_back(
        finish_group(domain, g.total, std::move(g.errors), thresholds));
  }
  report.overall =
      finish_group("(overall)", overall.total, std::move(overall.errors), thresholds);
  return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "domain,total,decided,coverage,median_error_km,rmse_km,combined_score\n";
  auto row = [&out](const GroupStats& g) {
    out << g.domain << ',' << g.total << ',' << g.decided << ',' << g.coverage << ','
        << g.median_error_km << ',' << g.rmse_km << ',';
    if (std::isfinite(g.combined_score)) {
      out << g.combined_score;
    } else {
      out << "inf";
    }
    out << '\n';
  };
  for (const GroupStats& g : report.per_domain) row(g);
  row(report.overall);
}

void write_cdf_tsv(const EvalReport& report, std::ostream& out) {
  out << "threshold_km\tfraction\n";
  for (const ThresholdFraction& tf : report.overall.cdf) {
    out << format_guard(tf.threshold_km) << '\t' << tf.fraction << '\n';
  }
}

}  // namespace rdnsgeo
