#ifndef AUTORISK_EVALUATION_HPP
#define AUTORISK_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorisk/diagnostics.hpp"
#include "autorisk/model.hpp"

namespace autorisk {

struct SplitResult {
  DesignMatrix train;
  DesignMatrix test;
};

// Uniform random partition without replacement, reproducible from seed;
// train gets round(n * train_fraction) rows. Binary designs must keep both
// classes on both sides.
SplitResult train_test_split(const DesignMatrix& design,
                             double train_fraction, std::uint64_t seed);

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
};

// Threshold sweep over the distinct scores, descending; starts at (0,0)
// with threshold +inf, ends at (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<double> thresholds;
};

struct RocResult {
  RocCurve curve;
  double auc = 0;
};

// AUC as the Mann-Whitney concordance P(score_pos > score_neg) + ties/2.
RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ComparisonRow {
  std::string model;  // logit | lda | fractional
  std::string input;  // binary | discrete
  std::optional<double> auc;
  std::optional<double> aic;
  double high_risk_share = 0;
  Shape shape = Shape::Unimodal;
};

struct ModelComparison {
  std::vector<ComparisonRow> rows;
};

// One row per model: AUC on the test design for binary-response models,
// AIC for likelihood-bearing fits, high-risk share and shape from the
// predicted probabilities. When `population` is given, share and shape
// are computed on it instead of on `test` (the test split then only
// serves the AUC).
ModelComparison compare_models(std::span<const AnyModel> fits,
                               const DesignMatrix& test,
                               double threshold = 0.7,
                               const DesignMatrix* population = nullptr);

std::string comparison_csv(const ModelComparison& comparison);
std::string comparison_json(const ModelComparison& comparison);

}  // namespace autorisk

#endif
