#include "autorisk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "autorisk/design.hpp"
#include "autorisk/errors.hpp"

namespace autorisk {

std::string_view to_string(Shape shape) {
  return shape == Shape::Bimodal ? "bimodal" : "unimodal";
}

double bimodality_coefficient(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 4) {
    throw TooFewPoints("bimodality coefficient needs n >= 4, got " +
                       std::to_string(values.size()));
  }
  // a point mass has no shape; catch it by value, since the accumulated mean
  // of identical doubles need not land on them exactly
  bool constant = true;
  for (double v : values) {
    if (v != values.front()) {
      constant = false;
      break;
    }
  }
  if (constant) return 0.0;
  double mean = 0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) return 0.0;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double correction = 3.0 * (n - 1) * (n - 1) / ((n - 2) * (n - 3));
  return (g1 * g1 + 1.0) / (g2 + correction);
}

Shape classify_shape(double bc) {
  return bc > kBimodalityBenchmark ? Shape::Bimodal : Shape::Unimodal;
}

double high_risk_share(std::span<const double> probabilities,
                       double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidConfig("high-risk threshold must lie in (0,1)");
  }
  if (probabilities.empty()) return 0.0;
  std::size_t above = 0;
  for (double p : probabilities) {
    if (p > threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(probabilities.size());
}

RiskDistribution describe_distribution(std::span<const double> probabilities,
                                       double threshold) {
  RiskDistribution dist;
  dist.probabilities.assign(probabilities.begin(), probabilities.end());
  dist.threshold = threshold;
  double sum = 0;
  for (double p : probabilities) {
    sum += p;
    auto bin = static_cast<std::size_t>(p * kHistogramBins);
    if (bin >= kHistogramBins) bin = kHistogramBins - 1;
    ++dist.histogram[bin];
  }
  dist.mean = probabilities.empty()
                  ? 0.0
                  : sum / static_cast<double>(probabilities.size());
  dist.bimodality = bimodality_coefficient(probabilities);
  dist.shape = classify_shape(dist.bimodality);
  dist.high_risk_share = high_risk_share(probabilities, threshold);
  return dist;
}

IscoAggregate aggregate_isco(std::span<const double> probabilities,
                             std::span<const WorkerRecord> records,
                             int level) {
  if (level != 1 && level != 2) {
    throw InvalidConfig("ISCO aggregation level must be 1 or 2");
  }
  if (probabilities.size() != records.size()) {
    throw FeatureMismatch("probabilities and records differ in length");
  }
  std::map<std::string, std::pair<double, std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string prefix =
        records[i].isco4.substr(0, static_cast<std::size_t>(level));
    auto& [sum, count] = groups[prefix];
    sum += probabilities[i];
    ++count;
  }
  IscoAggregate agg;
  agg.level = level;
  for (const auto& [prefix, acc] : groups) {
    agg.groups.push_back(
        {prefix, acc.first / static_cast<double>(acc.second), acc.second});
  }
  std::sort(agg.groups.begin(), agg.groups.end(),
            [](const IscoGroup& a, const IscoGroup& b) {
              if (a.mean_probability != b.mean_probability) {
                return a.mean_probability > b.mean_probability;
              }
              return a.prefix < b.prefix;
            });
  return agg;
}

std::string isco_csv(const IscoAggregate& agg) {
  std::ostringstream out;
  out << "isco_prefix,mean_probability,workers\n";
  char buf[32];
  for (const auto& group : agg.groups) {
    std::snprintf(buf, sizeof(buf), "%.6f", group.mean_probability);
    out << group.prefix << ',' << buf << ',' << group.count << '\n';
  }
  return out.str();
}

std::vector<WorkerRecord> filter_country(std::span<const WorkerRecord> records,
                                         Country country) {
  std::vector<WorkerRecord> out;
  for (const auto& rec : records) {
    if (rec.country == country) out.push_back(rec);
  }
  return out;
}

std::vector<double> predict_population(const AnyModel& model,
                                       std::span<const WorkerRecord> records,
                                       const DesignBuilder& builder) {
  const DesignMatrix design = builder(records);
  const Eigen::VectorXd p = predict_proba(model, design);
  return std::vector<double>(p.data(), p.data() + p.size());
}

std::vector<double> predict_population(const AnyModel& model,
                                       std::span<const WorkerRecord> records,
                                       int tier,
                                       std::optional<Country> country) {
  return predict_population(
      model, records, [tier, country](std::span<const WorkerRecord> recs) {
        return build_feature_matrix(recs, tier, country);
      });
}

}  // namespace autorisk
