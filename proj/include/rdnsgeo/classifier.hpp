#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdnsgeo/features.hpp"
#include "rdnsgeo/host_patterns.hpp"

namespace rdnsgeo {

struct LabeledPair {
  std::string hostname;
  std::string domain;
  std::int64_t location_id = 0;
  FeatureVector features{};
  bool label = false;
};

struct SamplingParams {
  std::size_t max_per_domain = 200;        // X
  double max_category_ratio = 10.0;        // Y
  double max_negative_ratio = 3.0;         // Z
  std::uint64_t seed = 1;
};

struct TrainParams {
  std::size_t epochs = 200;
  double learning_rate = 0.5;
  double l2 = 1e-4;  // applied to weights, not the bias
  std::uint64_t seed = 1;
};

struct TrainingMeta {
  SamplingParams sampling;
  TrainParams train;
  double positive_radius_km = 20.0;
  double threshold = 0.5;
  std::size_t sample_count = 0;
};

struct Model {
  std::vector<double> weights;  // kFeatureCount entries
  double bias = 0.0;
  std::uint32_t layout_version = kFeatureLayoutVersion;
  TrainingMeta meta;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static Model load(std::istream& in);
  static Model load_file(const std::string& path);
};

// One pair per (hostname, candidate); positive iff the candidate is the
// nearest one within positive_radius_km of the true coordinates, so a
// hostname has at most one positive pair.
std::vector<LabeledPair> label_pairs(const std::vector<TrainingHost>& corpus,
                                     const CandidateIndex& index,
                                     const PatternRuleSet* rules,
                                     double positive_radius_km = 20.0);

// Stratified down-sampling: at most X pairs per domain, then negatives
// capped at Z per positive, then pairs containing only over-represented
// primary categories dropped (negatives first) until the max/min category
// occurrence ratio is within Y. Deterministic under the seed; kept pairs
// stay in input order.
std::vector<LabeledPair> sample_pairs(const std::vector<LabeledPair>& pairs,
                                      const SamplingParams& params);

double logistic_loss(const std::vector<LabeledPair>& samples,
                     const std::vector<double>& weights, double bias, double l2);

// Gradient of logistic_loss; accumulation runs in sample-index order so
// training is bit-for-bit reproducible.
void logistic_gradient(const std::vector<LabeledPair>& samples,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_weights, double& grad_bias);

// Full-batch gradient descent with a fixed learning rate. Throws
// std::invalid_argument when samples are empty or single-class.
Model train_model(const std::vector<LabeledPair>& samples,
                  const TrainParams& params = {},
                  const SamplingParams& sampling_used = {},
                  double positive_radius_km = 20.0);

struct Prediction {
  bool plausible = false;
  double confidence = 0.0;
};

// Throws std::invalid_argument on a layout mismatch.
Prediction predict(const Model& model, const FeatureVector& fv);

struct RankedLocation {
  Location location;
  double confidence = 0.0;
};

// Candidates filtered to plausible ones, sorted by confidence descending,
// population descending, then location id. Throws SplitError for invalid
// hostnames; an empty result means no decision.
std::vector<RankedLocation> geolocate(const Model& model, const std::string& hostname,
                                      const CandidateIndex& index,
                                      const PatternRuleSet* rules);

}  // namespace rdnsgeo
