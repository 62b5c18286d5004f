#ifndef AUTORISK_LDA_HPP
#define AUTORISK_LDA_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "autorisk/design.hpp"

namespace autorisk {

// Two-class Gaussian discriminant with a shared covariance. Trained on the
// design's non-intercept columns (the constant column carries no
// discriminant information and would make the scatter singular).
struct LdaModel {
  std::vector<std::string> feature_names;  // without the intercept
  std::array<double, 2> priors{};          // class 0, class 1
  Eigen::VectorXd mean0;
  Eigen::VectorXd mean1;
  Eigen::MatrixXd pooled_covariance;
  std::size_t n = 0;
};

// Priors are empirical class shares; pooled covariance is the within-class
// scatter over (n - 2), ridge-stabilized by 1e-8 * trace/k on the diagonal.
LdaModel fit_lda(const DesignMatrix& design);

// Class-1 posterior per row via the two-class Bayes rule with Gaussian
// densities, evaluated in log space and clamped inside (0,1). Accepts
// designs with or without the intercept column.
Eigen::VectorXd predict_proba(const LdaModel& model,
                              const DesignMatrix& design);

std::string lda_to_json(const LdaModel& model);
LdaModel lda_from_json(const std::string& text);

}  // namespace autorisk

#endif
