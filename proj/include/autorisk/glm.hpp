#ifndef AUTORISK_GLM_HPP
#define AUTORISK_GLM_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "autorisk/design.hpp"

namespace autorisk {

enum class GlmKind { Logit, Fractional };

std::string_view to_string(GlmKind kind);

struct FittedGlm {
  GlmKind kind = GlmKind::Logit;
  std::vector<std::string> feature_names;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;  // model-based (Logit) or sandwich (Fractional)
  double log_likelihood = 0;   // quasi-log-likelihood for Fractional
  double aic = 0;
  std::size_t n = 0;
  bool converged = false;
  std::size_t iterations = 0;
};

// logistic(x) clamped to [1e-15, 1-1e-15]
double logistic(double x);

// Bernoulli (quasi-)log-likelihood sum of y*eta - log(1+exp(eta)),
// evaluated in softplus form so it is finite for any eta and handles
// y in [0,1] with the 0*log(0) = 0 convention.
double quasi_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta);

// Score of the same objective: X' (y - mu).
Eigen::VectorXd quasi_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta);

// Newton-Raphson maximum likelihood for the binary logit. Converges when
// the score infinity-norm drops below 1e-8; covariance is the inverse
// observed Fisher information.
FittedGlm fit_logit(const DesignMatrix& design);

// Bernoulli quasi-maximum-likelihood for a fractional response with a
// logistic mean. Same optimizer and criterion; covariance is the
// heteroskedasticity-robust sandwich.
FittedGlm fit_fractional(const DesignMatrix& design);

// Per-row logistic(beta' x), clamped inside (0,1).
Eigen::VectorXd predict_proba(const FittedGlm& model,
                              const DesignMatrix& design);

double aic(const FittedGlm& model);

std::string glm_to_json(const FittedGlm& model);
FittedGlm glm_from_json(const std::string& text);

}  // namespace autorisk

#endif
