#ifndef AUTORISK_DESIGN_HPP
#define AUTORISK_DESIGN_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorisk/labeling.hpp"
#include "autorisk/worker.hpp"

namespace autorisk {

enum class ResponseKind { Binary, Fractional };

std::string_view to_string(ResponseKind kind);

// Numeric feature matrix plus response. Column 0 is always the intercept.
// A prediction-only matrix has an empty response vector.
struct DesignMatrix {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd rows;      // n x k
  Eigen::VectorXd response;  // n, or empty for prediction-only
  ResponseKind response_kind = ResponseKind::Binary;
  std::vector<std::string> row_ids;

  std::size_t n() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t k() const { return static_cast<std::size_t>(rows.cols()); }
  bool has_response() const { return response.size() == rows.rows(); }
};

// Nested covariate blocks: tier 1 personal (age group, female dummy,
// education, education squared); 2 adds firm (private dummy, size);
// 3 adds job and skills (responsibility dummy, experience, job education,
// three skill scores); 4 is personal plus the 39 task encodings; 5 tasks
// only; 6 everything. Reference categories: male, public sector, no
// responsibility.
inline constexpr int kMinTier = 1;
inline constexpr int kMaxTier = 6;

std::vector<std::string> tier_feature_names(int tier);

// Rows only for workers whose occupation has the required response
// (consensus for Binary, mean for Fractional); optional country filter.
// Records must be imputed first.
DesignMatrix build_design_matrix(std::span<const WorkerRecord> records,
                                 std::span<const OccupationLabel> labels,
                                 ResponseKind kind, int tier,
                                 std::optional<Country> country = {});

// Same feature layout without a response: every (country-matching) worker
// gets a row, labelled occupation or not. Used for population prediction.
DesignMatrix build_feature_matrix(std::span<const WorkerRecord> records,
                                  int tier,
                                  std::optional<Country> country = {});

// Pearson correlations between the named columns (all non-intercept
// columns when names is empty). Unit diagonal, symmetric.
Eigen::MatrixXd correlation_matrix(const DesignMatrix& design,
                                   std::span<const std::string> names = {});

std::string correlation_csv(const DesignMatrix& design,
                            std::span<const std::string> names = {});

}  // namespace autorisk

#endif
