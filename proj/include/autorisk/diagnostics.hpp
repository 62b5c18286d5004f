#ifndef AUTORISK_DIAGNOSTICS_HPP
#define AUTORISK_DIAGNOSTICS_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorisk/model.hpp"
#include "autorisk/worker.hpp"

namespace autorisk {

enum class Shape { Bimodal, Unimodal };

std::string_view to_string(Shape shape);

// Sarle's bimodality coefficient (g1^2 + 1) / (g2 + 3(n-1)^2/((n-2)(n-3)))
// with moment skewness g1 and excess kurtosis g2. A zero-variance sample
// yields 0 (a point mass is as unimodal as it gets). Needs n >= 4.
double bimodality_coefficient(std::span<const double> values);

inline constexpr double kBimodalityBenchmark = 5.0 / 9.0;

// Bimodal iff the coefficient exceeds 5/9.
Shape classify_shape(double bc);

// Share with probability strictly above the threshold.
double high_risk_share(std::span<const double> probabilities,
                       double threshold = 0.7);

inline constexpr std::size_t kHistogramBins = 20;

struct RiskDistribution {
  std::vector<double> probabilities;
  std::array<std::size_t, kHistogramBins> histogram{};  // equal bins on [0,1]
  double mean = 0;
  double bimodality = 0;
  Shape shape = Shape::Unimodal;
  double high_risk_share = 0;
  double threshold = 0.7;
};

RiskDistribution describe_distribution(std::span<const double> probabilities,
                                       double threshold = 0.7);

struct IscoGroup {
  std::string prefix;  // 1 or 2 leading digits
  double mean_probability = 0;
  std::size_t count = 0;
};

struct IscoAggregate {
  int level = 1;
  std::vector<IscoGroup> groups;  // sorted descending by mean
};

// Mean predicted probability per ISCO major (level 1) or sub-major
// (level 2) group.
IscoAggregate aggregate_isco(std::span<const double> probabilities,
                             std::span<const WorkerRecord> records, int level);

std::string isco_csv(const IscoAggregate& agg);

std::vector<WorkerRecord> filter_country(std::span<const WorkerRecord> records,
                                         Country country);

// Scores every (country-matching) worker, labelled occupation or not.
// With a country filter the result is parallel to filter_country(records).
using DesignBuilder =
    std::function<DesignMatrix(std::span<const WorkerRecord>)>;

std::vector<double> predict_population(const AnyModel& model,
                                       std::span<const WorkerRecord> records,
                                       const DesignBuilder& builder);

std::vector<double> predict_population(const AnyModel& model,
                                       std::span<const WorkerRecord> records,
                                       int tier,
                                       std::optional<Country> country = {});

}  // namespace autorisk

#endif
