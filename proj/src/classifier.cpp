#include "rdnsgeo/classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  if (x > 35.0) return x;
  return std::log1p(std::exp(x));
}

double dot(const std::vector<double>& w, const FeatureVector& x) {
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[i];
  return z;
}

std::uint16_t category_mask(const FeatureVector& fv) {
  std::uint16_t mask = 0;
  for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
    if (fv[c * 3] > 0.0) mask |= static_cast<std::uint16_t>(1u << c);
  }
  return mask;
}

// Deterministic uniform draw in [0, n): std::uniform_int_distribution is
// implementation-defined, which would break byte-identical outputs.
std::size_t uniform_below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

nlohmann::json model_to_json(const Model& model) {
  nlohmann::json j;
  j["format"] = "rdnsgeo-model";
  j["format_version"] = 1;
  j["layout_version"] = model.layout_version;
  j["feature_names"] = feature_names();
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["training"] = {
      {"epochs", model.meta.train.epochs},
      {"learning_rate", model.meta.train.learning_rate},
      {"l2", model.meta.train.l2},
      {"seed", model.meta.train.seed},
      {"sample_count", model.meta.sample_count},
  };
  j["sampling"] = {
      {"max_per_domain", model.meta.sampling.max_per_domain},
      {"max_category_ratio", model.meta.sampling.max_category_ratio},
      {"max_negative_ratio", model.meta.sampling.max_negative_ratio},
      {"seed", model.meta.sampling.seed},
  };
  j["positive_radius_km"] = model.meta.positive_radius_km;
  j["threshold"] = model.meta.threshold;
  return j;
}

}  // namespace

void Model::save(std::ostream& out) const {
  nlohmann::json j = model_to_json(*this);
  std::string payload = j.dump(2);
  char checksum[17];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(fnv1a64(payload)));
  j["checksum"] = checksum;
  out << j.dump(2) << "\n";
}

void Model::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  save(out);
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

Model Model::load(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("model file is not valid JSON");
  }
  if (j.value("format", "") != "rdnsgeo-model") {
    throw std::runtime_error("not a model file");
  }
  if (!j.contains("checksum")) throw std::runtime_error("model file missing checksum");
  std::string stored = j["checksum"];
  nlohmann::json without = j;
  without.erase("checksum");
  char expected[17];
  std::snprintf(expected, sizeof expected, "%016llx",
                static_cast<unsigned long long>(fnv1a64(without.dump(2))));
  if (stored != expected) throw std::runtime_error("model file checksum mismatch");

  Model model;
  model.layout_version = j.at("layout_version").get<std::uint32_t>();
  if (model.layout_version != kFeatureLayoutVersion) {
    throw std::runtime_error("model layout version mismatch");
  }
  model.weights = j.at("weights").get<std::vector<double>>();
  if (model.weights.size() != kFeatureCount) {
    throw std::runtime_error("model weight count mismatch");
  }
  model.bias = j.at("bias").get<double>();
  const auto& t = j.at("training");
  model.meta.train.epochs = t.at("epochs").get<std::size_t>();
  model.meta.train.learning_rate = t.at("learning_rate").get<double>();
  model.meta.train.l2 = t.at("l2").get<double>();
  model.meta.train.seed = t.at("seed").get<std::uint64_t>();
  model.meta.sample_count = t.at("sample_count").get<std::size_t>();
  const auto& s = j.at("sampling");
  model.meta.sampling.max_per_domain = s.at("max_per_domain").get<std::size_t>();
  model.meta.sampling.max_category_ratio = s.at("max_category_ratio").get<double>();
  model.meta.sampling.max_negative_ratio = s.at("max_negative_ratio").get<double>();
  model.meta.sampling.seed = s.at("seed").get<std::uint64_t>();
  model.meta.positive_radius_km = j.at("positive_radius_km").get<double>();
  model.meta.threshold = j.at("threshold").get<double>();
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw std::runtime_error("model weights not finite");
  }
  if (!std::isfinite(model.bias)) throw std::runtime_error("model bias not finite");
  return model;
}

Model Model::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return load(in);
}

std::vector<LabeledPair> label_pairs(const std::vector<TrainingHost>& corpus,
                                     const CandidateIndex& index,
                                     const PatternRuleSet* rules,
                                     double positive_radius_km) {
  std::vector<LabeledPair> out;
  for (const TrainingHost& host : corpus) {
    std::vector<CandidateMatch> candidates =
        generate_candidates(index, rules, host.split);
    if (candidates.empty()) continue;

    std::optional<std::size_t> positive;
    double positive_dist = 0.0;
    std::vector<double> dists(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const Location& loc = index.location(candidates[i].location_idx);
      dists[i] = haversine_km(loc.point(), host.truth);
      if (dists[i] <= positive_radius_km && (!positive || dists[i] < positive_dist)) {
        positive = i;
        positive_dist = dists[i];
      }
    }

    for (std::size_t i = 0; i < candidates.size(); ++i) {
      LabeledPair pair;
      pair.hostname = host.split.unicode_form;
      pair.domain = host.split.domain;
      pair.location_id = index.location(candidates[i].location_idx).id;
      SecondaryFlags sec = secondary_features(host.split, candidates[i], index);
      pair.features = assemble_features(candidates[i], sec);
      pair.label = positive && *positive == i;
      out.push_back(std::move(pair));
    }
  }
  return out;
}

std::vector<LabeledPair> sample_pairs(const std::vector<LabeledPair>& pairs,
                                      const SamplingParams& params) {
  std::mt19937_64 rng(params.seed);

  // Stage X: cap per-domain counts.
  std::map<std::string, std::vector<std::size_t>> by_domain;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_domain[pairs[i].domain].push_back(i);

  std::vector<bool> kept(pairs.size(), false);
  for (auto& [domain, indices] : by_domain) {
    if (indices.size() > params.max_per_domain) {
      seeded_shuffle(indices, rng);
      indices.resize(params.max_per_domain);
    }
    for (std::size_t i : indices) kept[i] = true;
  }

  std::vector<std::uint16_t> masks(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) masks[i] = category_mask(pairs[i].features);

  auto kept_indices = [&]() {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (kept[i]) v.push_back(i);
    }
    return v;
  };

  auto drop_negatives_to_ratio = [&]() {
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!kept[i]) continue;
      (pairs[i].label ? pos : neg)++;
    }
    std::size_t target =
        static_cast<std::size_t>(params.max_negative_ratio * static_cast<double>(pos));
    if (neg <= target) return;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (kept[i] && !pairs[i].label) negatives.push_back(i);
    }
    seeded_shuffle(negatives, rng);
    for (std::size_t k = 0; k < neg - target; ++k) kept[negatives[k]] = false;
  };

  // Stage Y: drop pairs whose categories are all over-represented, rounds
  // of random drops until the occurrence ratio holds or nothing droppable
  // remains. Negatives go first so the Z cap cannot be re-broken from this
  // side.
  auto enforce_category_ratio = [&]() {
    for (int round = 0; round < 1000; ++round) {
      std::array<std::size_t, kPrimaryCategoryCount> counts{};
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!kept[i]) continue;
        for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
          if (masks[i] & (1u << c)) ++counts[c];
        }
      }
      std::size_t min_count = 0, max_count = 0;
      bool any = false;
      for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
        if (counts[c] == 0) continue;
        if (!any || counts[c] < min_count) min_count = counts[c];
        if (!any || counts[c] > max_count) max_count = counts[c];
        any = true;
      }
      if (!any) return true;
      if (static_cast<double>(max_count) <=
          params.max_category_ratio * static_cast<double>(min_count)) {
        return true;
      }

      std::uint16_t over = 0;
      for (std::size_t c = 0; c < kPrimaryCategoryCount; ++c) {
        if (counts[c] > 0 && static_cast<double>(counts[c]) >
                                 params.max_category_ratio * static_cast<double>(min_count)) {
          over |= static_cast<std::uint16_t>(1u << c);
        }
      }
      std::vector<std::size_t> droppable_neg;
      std::vector<std::size_t> droppable_pos;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!kept[i] || masks[i] == 0) continue;
        if ((masks[i] & ~over) == 0) {
          (pairs[i].label ? droppable_pos : droppable_neg).push_back(i);
        }
      }
      std::vector<std::size_t>& pool =
          droppable_neg.empty() ? droppable_pos : droppable_neg;
      if (pool.empty()) return false;

      std::size_t excess =
          max_count - static_cast<std::size_t>(params.max_category_ratio *
                                               static_cast<double>(min_count));
      std::size_t to_drop = std::min(pool.size(), std::max<std::size_t>(1, excess));
      seeded_shuffle(pool, rng);
      for (std::size_t k = 0; k < to_drop; ++k) kept[pool[k]] = false;
    }
    return false;
  };

  drop_negatives_to_ratio();
  for (int outer = 0; outer < 16; ++outer) {
    bool y_done = enforce_category_ratio();
    std::size_t before = kept_indices().size();
    drop_negatives_to_ratio();
    if (y_done && kept_indices().size() == before) break;
  }

  std::vector<LabeledPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (kept[i]) out.push_back(pairs[i]);
  }
  return out;
}

double logistic_loss(const std::vector<LabeledPair>& samples,
                     const std::vector<double>& weights, double bias, double l2) {
  double loss = 0.0;
  for (const LabeledPair& s : samples) {
    double z = dot(weights, s.features) + bias;
    // -log p(y|x) = softplus(z) - y*z
    loss += softplus(z) - (s.label ? z : 0.0);
  }
  loss /= static_cast<double>(samples.size());
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const std::vector<LabeledPair>& samples,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_weights, double& grad_bias) {
  grad_weights.assign(weights.size(), 0.0);
  grad_bias = 0.0;
  for (const LabeledPair& s : samples) {
    double p = sigmoid(dot(weights, s.features) + bias);
    double err = p - (s.label ? 1.0 : 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      grad_weights[i] += err * s.features[i];
    }
    grad_bias += err;
  }
  double inv_n = 1.0 / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    grad_weights[i] = grad_weights[i] * inv_n + l2 * weights[i];
  }
  grad_bias *= inv_n;
}

Model train_model(const std::vector<LabeledPair>& samples, const TrainParams& params,
                  const SamplingParams& sampling_used, double positive_radius_km) {
  std::size_t pos = 0, neg = 0;
  for (const LabeledPair& s : samples) (s.label ? pos : neg)++;
  if (samples.empty()) throw std::invalid_argument("training set is empty");
  if (pos == 0) throw std::invalid_argument("training set has no positive samples");
  if (neg == 0) throw std::invalid_argument("training set has no negative samples");

  Model model;
  model.weights.assign(kFeatureCount, 0.0);
  model.bias = 0.0;
  model.layout_version = kFeatureLayoutVersion;
  model.meta.train = params;
  model.meta.sampling = sampling_used;
  model.meta.positive_radius_km = positive_radius_km;
  model.meta.sample_count = samples.size();

  std::vector<double> grad(kFeatureCount, 0.0);
  double grad_bias = 0.0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    logistic_gradient(samples, model.weights, model.bias, params.l2, grad, grad_bias);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      model.weights[i] -= params.learning_rate * grad[i];
    }
    model.bias -= params.learning_rate * grad_bias;
  }
  return model;
}

Prediction predict(const Model& model, const FeatureVector& fv) {
  if (model.layout_version != kFeatureLayoutVersion ||
      model.weights.size() != kFeatureCount) {
    throw std::invalid_argument("model does not match the feature layout");
  }
  Prediction p;
  p.confidence = sigmoid(dot(model.weights, fv) + model.bias);
  p.plausible = p.confidence >= model.meta.threshold;
  return p;
}

std::vector<RankedLocation> geolocate(const Model& model, const std::string& hostname,
                                      const CandidateIndex& index,
                                      const PatternRuleSet* rules) {
  SplitHostname split = split_hostname(hostname, index.suffixes(), index.blacklist());
  std::vector<CandidateMatch> candidates = generate_candidates(index, rules, split);

  std::vector<RankedLocation> out;
  for (const CandidateMatch& cand : candidates) {
    SecondaryFlags sec = secondary_features(split, cand, index);
    Prediction pred = predict(model, assemble_features(cand, sec));
    if (!pred.plausible) continue;
    out.push_back(RankedLocation{index.location(cand.location_idx), pred.confidence});
  }
  std::sort(out.begin(), out.end(), [](const RankedLocation& a, const RankedLocation& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.location.population != b.location.population) {
      return a.location.population > b.location.population;
    }
    return a.location.id < b.location.id;
  });
  return out;
}

}  // namespace rdnsgeo
